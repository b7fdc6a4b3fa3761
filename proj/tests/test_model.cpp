#include <doctest.h>

#include <random>

#include "pentadot/fock.hpp"
#include "pentadot/model.hpp"
#include "pentadot/operators.hpp"

using namespace pentadot;

TEST_CASE("five_dot builds the star") {
  const DeviceGraph g = five_dot(-1.0, 8.0, 0.0);
  CHECK(g.n_dots() == 5);
  REQUIRE(g.edges().size() == 4);
  for (const auto& e : g.edges()) {
    CHECK(e.i == 0);
    CHECK(e.t == -1.0);
  }
  for (const auto& d : g.dots()) CHECK(d.U == 8.0);
  CHECK_FALSE(g.find_edge(1, 2).has_value());
  CHECK(g.find_edge(3, 0).has_value());

  const DeviceGraph off = five_dot(-1.0, 8.0, 0.5, -1.0);
  CHECK(off.dots()[0].mu == doctest::Approx(-0.5));
  CHECK(off.dots()[3].mu == 0.5);

  CHECK_THROWS_AS(five_dot(0.0, 8.0, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(five_dot(-1.0, -8.0, 0.0), std::invalid_argument);
}

TEST_CASE("two_qubit_device") {
  const DeviceGraph g = two_qubit_device(-1.0, 8.0, 0.0, default_coupling_edges());
  CHECK(g.n_dots() == 10);
  CHECK(g.edges().size() == 10);
  CHECK(g.edges()[g.find_edge(3, 6).value()].t == 0.0);

  CHECK(two_qubit_device(-1.0, 8.0, 0.0, {}).edges().size() == 8);
  CHECK_THROWS_AS(two_qubit_device(-1.0, 8.0, 0.0, {{0, 5}}), std::invalid_argument);
  CHECK_THROWS_AS(two_qubit_device(-1.0, 8.0, 0.0, {{1, 2}}), std::invalid_argument);
}

TEST_CASE("DeviceGraph invariants") {
  std::vector<Dot> dots{{0, 8, 0, 0}, {1, 8, 0, 0}};
  CHECK_THROWS_AS(DeviceGraph(dots, {{0, 0, 1.0}}), std::invalid_argument);
  CHECK_THROWS_AS(DeviceGraph(dots, {{0, 1, 1.0}, {1, 0, 1.0}}), std::invalid_argument);
  CHECK_THROWS_AS(DeviceGraph(dots, {{0, 2, 1.0}}), std::invalid_argument);
  CHECK_THROWS_AS(DeviceGraph({{0, 8, 0, 0}, {2, 8, 0, 0}}, {}), std::invalid_argument);
  CHECK_THROWS_AS(DeviceGraph({{0, 8, 0, 0}, {0, 8, 0, 0}}, {}), std::invalid_argument);
}

TEST_CASE("apply_delta") {
  const DeviceGraph g = five_dot(-1.0, 8.0, 0.0);
  CHECK(apply_delta(g, DeviceDelta{}) == g);

  DeviceDelta d;
  d.edge_deltas[EdgeKey(1, 0)] = 0.1;
  const DeviceGraph h = apply_delta(g, d);
  CHECK(h.edges()[h.find_edge(0, 1).value()].t == doctest::Approx(-0.9));
  for (int k = 2; k <= 4; ++k) CHECK(h.edges()[h.find_edge(0, k).value()].t == -1.0);
  CHECK(h.dots() == g.dots());
  CHECK(g.edges()[0].t == -1.0);

  DeviceDelta bad_edge;
  bad_edge.edge_deltas[EdgeKey(1, 2)] = 0.1;
  CHECK_THROWS_AS(apply_delta(g, bad_edge), std::invalid_argument);
  DeviceDelta bad_dot;
  bad_dot.site_deltas[7].dmu = 1.0;
  CHECK_THROWS_AS(apply_delta(g, bad_dot), std::invalid_argument);
}

TEST_CASE("apply_delta followed by its negative restores the device exactly") {
  // Dyadic rationals keep every sum exact.
  std::mt19937 rng(7);
  std::uniform_int_distribution<int> pick(-64, 64);
  const DeviceGraph g = five_dot(-1.0, 8.0, 0.25, 0.5);
  for (int trial = 0; trial < 50; ++trial) {
    DeviceDelta d;
    for (int k = 1; k <= 4; ++k) d.edge_deltas[EdgeKey(0, k)] = pick(rng) / 32.0;
    for (int k = 0; k < 5; ++k) d.site_deltas[k] = SiteDelta{pick(rng) / 16.0, pick(rng) / 64.0};
    CHECK(apply_delta(apply_delta(g, d), -d) == g);
  }
}

TEST_CASE("DeviceDelta algebra") {
  const DeviceDelta a = tunneling_pulse(0, {1, 2}, 0.1);
  CHECK(a.edge_deltas.size() == 2);
  CHECK(a.scaled(2.0).edge_deltas.at(EdgeKey(0, 2)) == doctest::Approx(0.2));
  CHECK((a + (-a)).empty());
  CHECK(DeviceDelta{}.empty());
  const DeviceDelta c = coupling_pulse({{3, 6}, {7, 4}}, 0.3);
  CHECK(c.edge_deltas.count(EdgeKey(4, 7)) == 1);
}

TEST_CASE("Zeeman site term on a two-dot device") {
  // One up electron on dot 1 of a 2-dot chain: <1up| H |1up> gains +bz/2.
  const DeviceGraph g({{0, 8, 0, 0}, {1, 8, 0, 0}}, {{0, 1, -1.0}});
  DeviceDelta d;
  d.site_deltas[1].bz = 0.05;
  const SectorBasis up(2, 1, 0);
  const SectorBasis dn(2, 0, 1);
  const Eigen::MatrixXcd hu = assemble_hubbard(apply_delta(g, d), up).to_dense();
  const Eigen::MatrixXcd hd = assemble_hubbard(apply_delta(g, d), dn).to_dense();
  const std::size_t on1_up = up.index(FockState{0b10, 0}).value();
  const std::size_t on0_up = up.index(FockState{0b01, 0}).value();
  const std::size_t on1_dn = dn.index(FockState{0, 0b10}).value();
  CHECK(hu(on1_up, on1_up).real() == doctest::Approx(0.025));
  CHECK(hu(on0_up, on0_up).real() == doctest::Approx(0.0));
  CHECK(hd(on1_dn, on1_dn).real() == doctest::Approx(-0.025));
  CHECK(std::abs(hu(on0_up, on1_up) - cplx(-1.0)) < 1e-15);
}
