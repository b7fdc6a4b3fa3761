#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>

#include "pentadot/io.hpp"

using namespace pentadot;

TEST_CASE("device JSON round trip") {
  const DeviceGraph g = two_qubit_device(-1.0, 8.0, 0.3, default_coupling_edges());
  CHECK(device_from_json(device_to_json(g)) == g);

  DeviceDelta d;
  d.site_deltas[2].bz = 0.125;
  const DeviceGraph z = apply_delta(five_dot(-1.0, 8.0, 0.0, -1.0), d);
  const json j = device_to_json(z);
  CHECK(j["dots"][2].contains("bz"));
  CHECK_FALSE(j["dots"][1].contains("bz"));
  CHECK(device_from_json(j) == z);
  CHECK(device_from_json(json::parse(dump(j))) == z);

  const auto path = std::filesystem::temp_directory_path() / "pentadot_io_device.json";
  save_device(path.string(), z);
  CHECK(load_device(path.string()) == z);
  std::filesystem::remove(path);
}

TEST_CASE("malformed devices are rejected") {
  CHECK_THROWS_AS(device_from_json(json::parse(R"({"dots": []})")), FormatError);
  CHECK_THROWS_AS(device_from_json(json::parse(R"({"dots": [{"id": 0, "U": "8", "mu": 0}], "edges": []})")), FormatError);
  CHECK_THROWS_AS(device_from_json(json::parse(R"({"dots": [{"id": 0, "U": 8, "mu": 0}], "edges": [{"i": 0, "j": 0, "t": 1}]})")),
                  FormatError);
  CHECK_THROWS_AS(load_device("/nonexistent/device.json"), FormatError);

  const auto path = std::filesystem::temp_directory_path() / "pentadot_io_bad.json";
  std::ofstream(path) << "{ not json";
  CHECK_THROWS_AS(load_device(path.string()), FormatError);
  std::filesystem::remove(path);
}

TEST_CASE("delta and matrix round trips") {
  DeviceDelta d = tunneling_pulse(0, {1, 4}, 0.05);
  d.site_deltas[3] = SiteDelta{-0.5, 0.25};
  const DeviceDelta back = delta_from_json(delta_to_json(d));
  CHECK(back.edge_deltas == d.edge_deltas);
  CHECK(back.site_deltas.at(3).dmu == -0.5);
  CHECK(back.site_deltas.at(3).bz == 0.25);

  Eigen::MatrixXcd m(2, 3);
  m << cplx(1, 2), cplx(0.1, -3), 0.0, cplx(-1e-17, 5), 7.0, cplx(0, 1);
  CHECK(matrix_from_json(matrix_to_json(m)) == m);
  CHECK(matrix_from_json(json::parse(dump(matrix_to_json(m)))) == m);
  CHECK_THROWS_AS(matrix_from_json(json::array()), FormatError);
  CHECK_THROWS_AS(matrix_from_json(json::parse("[[[1,0]],[[1,0],[2,0]]]")), FormatError);
  CHECK_THROWS_AS(matrix_from_json(json::parse("[[[1,0,0]]]")), FormatError);
}

TEST_CASE("gate and basis reports") {
  const QubitSetup q = encode_single_qubit(five_dot(-1, 8, 0));
  const EffectiveGate g = effective_hamiltonian(q, tunneling_pulse(0, {1, 2}, 0.05));
  const json r = gate_report(g);
  CHECK(r["method"] == "exact-splitting");
  CHECK(r["pauli"]["z"].get<double>() == g.pauli.z);
  CHECK(matrix_from_json(r["matrix"]) == g.matrix);
  CHECK(r["seed"].get<std::uint64_t>() == 20031);

  const json b = encoded_basis_json(q.encoded);
  CHECK(b["sector"]["tag"] == "fock:5:2:2");
  CHECK(b["vectors"].size() == 2);
  CHECK(b["gauge"]["parity_values"][0] == json({-1, -1}));
  Eigen::VectorXcd v0 = Eigen::VectorXcd::Zero(100);
  for (const auto& e : b["vectors"][0]) v0(e[0].get<Eigen::Index>()) = cplx(e[1].get<double>(), e[2].get<double>());
  CHECK(v0 == q.encoded.vectors.col(0));
  CHECK(encoded_basis_json(q.encoded, 1e-3)["vectors"][0].size() < b["vectors"][0].size());
}

TEST_CASE("run config and provenance") {
  RunConfig c;
  c.command = "gate1";
  c.device = "dev.json";
  c.params = {{"pair", "14"}, {"dt", 0.05}};
  c.seed = 42;
  c.output = "out.json";
  CHECK(run_config_from_json(run_config_to_json(c)) == c);

  const std::string line = provenance_line(c);
  CHECK(line.rfind("# pentadot-run {", 0) == 0);
  CHECK(line.back() == '\n');
  CHECK(parse_provenance(line + "mu,N\n0,1\n") == c);
  CHECK(parse_provenance(dump({{"config", run_config_to_json(c)}, {"result", 1}})) == c);
  CHECK_THROWS_AS(parse_provenance("mu,N\n"), FormatError);
  CHECK_THROWS_AS(parse_provenance(R"({"result": 1})"), FormatError);
  CHECK_THROWS_AS(run_config_from_json(json::parse(R"({"command": "x"})")), FormatError);
  CHECK(dump(run_config_to_json(c)) == dump(run_config_to_json(run_config_from_json(run_config_to_json(c)))));
}
