#include "pentadot/io.hpp"

#include <fstream>
#include <sstream>

namespace pentadot {

namespace {

constexpr const char* kProvenanceTag = "# pentadot-run ";

double number(const json& j, const char* key) {
  if (!j.contains(key)) throw FormatError(std::string("missing field '") + key + "'");
  if (!j.at(key).is_number()) throw FormatError(std::string("field '") + key + "' must be a number");
  return j.at(key).get<double>();
}

int integer(const json& j, const char* key) {
  if (!j.contains(key)) throw FormatError(std::string("missing field '") + key + "'");
  if (!j.at(key).is_number_integer()) throw FormatError(std::string("field '") + key + "' must be an integer");
  return j.at(key).get<int>();
}

const json& array(const json& j, const char* key) {
  if (!j.is_object() || !j.contains(key) || !j.at(key).is_array()) {
    throw FormatError(std::string("expected an array '") + key + "'");
  }
  return j.at(key);
}

}  // namespace

json device_to_json(const DeviceGraph& g) {
  json dots = json::array();
  for (const auto& d : g.dots()) {
    json o = {{"id", d.id}, {"U", d.U}, {"mu", d.mu}};
    if (d.bz != 0.0) o["bz"] = d.bz;
    dots.push_back(o);
  }
  json edges = json::array();
  for (const auto& e : g.edges()) edges.push_back({{"i", e.i}, {"j", e.j}, {"t", e.t}});
  return {{"dots", dots}, {"edges", edges}};
}

DeviceGraph device_from_json(const json& j) {
  std::vector<Dot> dots;
  for (const auto& d : array(j, "dots")) {
    Dot dot;
    dot.id = integer(d, "id");
    dot.U = number(d, "U");
    dot.mu = number(d, "mu");
    if (d.contains("bz")) dot.bz = number(d, "bz");
    dots.push_back(dot);
  }
  std::vector<Edge> edges;
  for (const auto& e : array(j, "edges")) edges.push_back(Edge{integer(e, "i"), integer(e, "j"), number(e, "t")});
  try {
    return DeviceGraph(std::move(dots), std::move(edges));
  } catch (const std::invalid_argument& ex) {
    throw FormatError(std::string("invalid device: ") + ex.what());
  }
}

DeviceGraph load_device(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot read device file '" + path + "'");
  json j;
  try {
    in >> j;
  } catch (const json::exception& ex) {
    throw FormatError("device file '" + path + "': " + ex.what());
  }
  try {
    return device_from_json(j);
  } catch (const FormatError& ex) {
    throw FormatError("device file '" + path + "': " + ex.what());
  }
}

void save_device(const std::string& path, const DeviceGraph& g) {
  std::ofstream out(path);
  if (!out) throw FormatError("cannot write '" + path + "'");
  out << dump(device_to_json(g));
}

json delta_to_json(const DeviceDelta& d) {
  json edges = json::array();
  for (const auto& [k, dt] : d.edge_deltas) edges.push_back({{"i", k.lo}, {"j", k.hi}, {"dt", dt}});
  json sites = json::array();
  for (const auto& [id, s] : d.site_deltas) sites.push_back({{"id", id}, {"dmu", s.dmu}, {"bz", s.bz}});
  return {{"edges", edges}, {"sites", sites}};
}

DeviceDelta delta_from_json(const json& j) {
  DeviceDelta d;
  for (const auto& e : array(j, "edges")) d.edge_deltas[EdgeKey(integer(e, "i"), integer(e, "j"))] += number(e, "dt");
  for (const auto& s : array(j, "sites")) {
    SiteDelta& sd = d.site_deltas[integer(s, "id")];
    sd.dmu += number(s, "dmu");
    sd.bz += number(s, "bz");
  }
  return d;
}

json matrix_to_json(const Eigen::MatrixXcd& m) {
  json rows = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back({m(r, c).real(), m(r, c).imag()});
    rows.push_back(row);
  }
  return rows;
}

Eigen::MatrixXcd matrix_from_json(const json& j) {
  if (!j.is_array() || j.empty()) throw FormatError("matrix must be a nonempty array of rows");
  const auto n = static_cast<Eigen::Index>(j.size());
  const auto m = static_cast<Eigen::Index>(j[0].size());
  Eigen::MatrixXcd out(n, m);
  for (Eigen::Index r = 0; r < n; ++r) {
    const json& row = j[static_cast<std::size_t>(r)];
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != m) throw FormatError("ragged matrix");
    for (Eigen::Index c = 0; c < m; ++c) {
      const json& v = row[static_cast<std::size_t>(c)];
      if (!v.is_array() || v.size() != 2) throw FormatError("matrix entries must be [re, im]");
      out(r, c) = {v[0].get<double>(), v[1].get<double>()};
    }
  }
  return out;
}

json gate_report(const EffectiveGate& g) {
  json out;
  out["delta"] = delta_to_json(g.perturbation);
  out["matrix"] = matrix_to_json(g.matrix);
  out["first_order"] = matrix_to_json(g.first_order);
  if (g.matrix.rows() == 2) {
    out["pauli"] = {{"i", g.pauli.i}, {"x", g.pauli.x}, {"y", g.pauli.y}, {"z", g.pauli.z}};
  } else {
    out["pauli"] = {{"diagonal", std::vector<double>(g.diagonal.data(), g.diagonal.data() + g.diagonal.size())}};
  }
  out["method"] = g.method;
  out["method_difference"] = g.method_difference;
  out["max_off_diagonal"] = g.max_off_diagonal;
  out["s2_max"] = g.s2_max;
  out["overlap_min"] = g.overlap_min;
  out["gap"] = g.gap;
  out["seed"] = g.seed;
  return out;
}

json cphase_plan_json(const CPhasePlan& p) {
  json out;
  out["coefficients"] = {p.coefficients(0), p.coefficients(1), p.coefficients(2)};
  out["offset"] = {p.offset(0), p.offset(1), p.offset(2), p.offset(3)};
  out["branch"] = {p.branch(0), p.branch(1), p.branch(2)};
  out["branch_rule"] = p.branch_rule;
  out["predicted_unitary"] = matrix_to_json(p.predicted_unitary);
  out["fidelity_deficit"] = p.fidelity_deficit;
  out["commutator_norms"] = p.commutator_norms;
  out["coupling_contrast"] = p.coupling_contrast;
  json gens = json::array();
  for (const auto& g : p.generators) gens.push_back(matrix_to_json(g));
  out["generators"] = gens;
  return out;
}

json encoded_basis_json(const EncodedBasis& e, double cutoff) {
  json out;
  out["sector"] = {{"n_dots", e.n_dots}, {"n_up", e.n_up}, {"n_dn", e.n_dn}, {"tag", e.basis_tag}};
  json vectors = json::array();
  for (Eigen::Index k = 0; k < e.vectors.cols(); ++k) {
    json coeffs = json::array();
    for (Eigen::Index i = 0; i < e.vectors.rows(); ++i) {
      const cplx v = e.vectors(i, k);
      if (std::abs(v) > cutoff) coeffs.push_back({i, v.real(), v.imag()});
    }
    vectors.push_back(coeffs);
  }
  out["vectors"] = vectors;
  out["gauge"] = {{"parity_names", e.gauge.parity_names},
                  {"parity_values", e.gauge.parity_values},
                  {"phase_rule", e.gauge.phase_rule},
                  {"reference_overlaps", e.gauge.reference_overlaps}};
  return out;
}

json run_config_to_json(const RunConfig& c) {
  return {{"command", c.command}, {"device", c.device}, {"params", c.params}, {"seed", c.seed}, {"output", c.output}};
}

RunConfig run_config_from_json(const json& j) {
  if (!j.is_object()) throw FormatError("run config must be an object");
  RunConfig c;
  try {
    c.command = j.at("command").get<std::string>();
    c.device = j.at("device").get<std::string>();
    c.params = j.at("params");
    c.seed = j.at("seed").get<std::uint64_t>();
    c.output = j.at("output").get<std::string>();
  } catch (const json::exception& ex) {
    throw FormatError(std::string("run config: ") + ex.what());
  }
  return c;
}

std::string provenance_line(const RunConfig& c) { return kProvenanceTag + run_config_to_json(c).dump() + "\n"; }

RunConfig parse_provenance(const std::string& text) {
  const std::string tag = kProvenanceTag;
  if (text.compare(0, tag.size(), tag) == 0) {
    const auto end = text.find('\n');
    return run_config_from_json(json::parse(text.substr(tag.size(), end - tag.size())));
  }
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& ex) {
    throw FormatError(std::string("no provenance header: ") + ex.what());
  }
  if (!j.is_object() || !j.contains("config")) throw FormatError("no provenance header");
  return run_config_from_json(j.at("config"));
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

}  // namespace pentadot
