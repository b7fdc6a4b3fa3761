#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "pentadot/dynamics.hpp"
#include "pentadot/encoding.hpp"
#include "pentadot/gates.hpp"
#include "pentadot/io.hpp"
#include "pentadot/studies.hpp"

using namespace pentadot;

namespace {

// Options shared by every command.
struct Common {
  std::string device;
  double t = -1.0;
  double U = 8.0;
  double mu = 0.0;
  double center_offset = 0.0;
  std::uint64_t seed = 20031;
  double tol = 1e-10;
  double cluster_tol = 1e-7;
  std::size_t max_matvecs = 400000;
  std::string out;
};

struct SweepOpts {
  double mu_min = -2.0;
  double mu_max = 10.0;
  double step = 0.02;
  std::string plateaus;
};

struct GroundOpts {
  int n_up = 2;
  int n_dn = 2;
  std::size_t levels = 8;
};

struct HeisenbergOpts {
  int n = 4;
  double j = 1.0;
};

struct Gate1Opts {
  std::string pair = "12";
  double dt = 0.05;
  int electrons = 4;
  std::string basis_out;
};

struct Gate2Opts {
  double dt = 0.05;
  std::string coupling = "3-6,4-7";
  std::string bonds;
};

struct CPhaseOpts {
  double dt = 0.05;
  std::string coupling = "3-6,4-7";
  bool simulate = false;
  double couple_dt = 0.3;
  double local_dt = -0.2;
  std::string ramp = "cosine";
  double ramp_time = 50.0;
  int nodes = 12;
  double krylov_tol = 1e-10;
  double substep = 0.25;
  std::string trajectory;
  double sample = 1.0;
};

struct ImmunityOpts {
  std::string bz = "0,0.01,0.02,0.05,0.1";
  std::string field = "1:1";
};

struct RobustOpts {
  std::string kind = "both";
  std::string deltas = "0,0.05,0.1,0.2";
  double J = 1.0;
};

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, sep)) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

std::vector<double> parse_list(const std::string& s) {
  std::vector<double> out;
  for (const auto& x : split(s, ',')) {
    std::size_t used = 0;
    const double v = std::stod(x, &used);
    if (used != x.size()) throw std::invalid_argument("not a number: '" + x + "'");
    out.push_back(v);
  }
  if (out.empty()) throw std::invalid_argument("empty number list");
  return out;
}

std::vector<std::pair<int, int>> parse_edges(const std::string& s) {
  std::vector<std::pair<int, int>> out;
  for (const auto& e : split(s, ',')) {
    const auto ends = split(e, '-');
    if (ends.size() != 2) throw std::invalid_argument("edge must look like 3-6: '" + e + "'");
    out.emplace_back(std::stoi(ends[0]), std::stoi(ends[1]));
  }
  return out;
}

std::vector<std::pair<int, double>> parse_field(const std::string& s) {
  std::vector<std::pair<int, double>> out;
  for (const auto& e : split(s, ',')) {
    const auto parts = split(e, ':');
    if (parts.size() != 2) throw std::invalid_argument("field entry must look like dot:weight: '" + e + "'");
    out.emplace_back(std::stoi(parts[0]), std::stod(parts[1]));
  }
  return out;
}

SolverOptions solver(const Common& c) {
  SolverOptions o;
  o.tol = c.tol;
  o.cluster_tol = c.cluster_tol;
  o.max_matvecs = c.max_matvecs;
  o.seed = c.seed;
  return o;
}

DeviceGraph five_dot_device(const Common& c) {
  if (!c.device.empty()) return load_device(c.device);
  return five_dot(c.t, c.U, c.mu, c.center_offset);
}

DeviceGraph ten_dot_device(const Common& c, const std::vector<std::pair<int, int>>& coupling) {
  if (!c.device.empty()) return load_device(c.device);
  return two_qubit_device(c.t, c.U, c.mu, coupling);
}

RunConfig base_config(const std::string& command, const Common& c) {
  RunConfig cfg;
  cfg.command = command;
  cfg.device = c.device;
  cfg.seed = c.seed;
  cfg.output = c.out;
  cfg.params = {{"t", c.t},          {"U", c.U},
                {"mu", c.mu},        {"center-offset", c.center_offset},
                {"tol", c.tol},      {"cluster-tol", c.cluster_tol},
                {"max-matvecs", c.max_matvecs}};
  return cfg;
}

void write_text(const std::string& path, const std::string& text) {
  if (path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write '" + path + "'");
  f << text;
}

void write_json(const std::string& path, const RunConfig& cfg, const json& result) {
  write_text(path, dump(json{{"config", run_config_to_json(cfg)}, {"result", result}}));
}

void write_csv(const std::string& path, const RunConfig& cfg, const std::string& csv) {
  write_text(path, provenance_line(cfg) + csv);
}

json clusters_json(const DegeneracyReport& rep) {
  json out = json::array();
  for (const auto& c : rep.clusters) {
    out.push_back({{"energy", c.mean_energy},
                   {"multiplicity", c.multiplicity},
                   {"spread", c.spread},
                   {"S", c.spin},
                   {"s2", c.s2},
                   {"pure_spin", c.pure_spin},
                   {"complete", c.complete}});
  }
  return out;
}

DeviceDelta single_qubit_pulse(const std::string& pair, double dt) {
  if (pair == "12") return tunneling_pulse(0, {1, 2}, dt);
  if (pair == "34") return tunneling_pulse(0, {3, 4}, dt);
  if (pair == "14") return tunneling_pulse(0, {1, 4}, dt);
  if (pair == "23") return tunneling_pulse(0, {2, 3}, dt);
  throw std::invalid_argument("--pair must be one of 12, 34, 14, 23");
}

void run_sweep(const Common& c, const SweepOpts& o, RunConfig cfg) {
  cfg.params.update({{"mu-min", o.mu_min}, {"mu-max", o.mu_max}, {"step", o.step}, {"plateaus", o.plateaus}});
  const SectorLadder ladder(five_dot_device(c), solver(c));
  const StaircaseTable table = occupancy_staircase(ladder, mu_grid(o.mu_min, o.mu_max, o.step));
  write_csv(c.out, cfg, staircase_csv(table));
  if (!o.plateaus.empty()) {
    std::ostringstream os;
    os.precision(12);
    os << "N,mu_lo,mu_hi,width,bounded,multiplicity,S\n";
    for (const auto& p : table.plateaus) {
      os << p.n << ',' << p.mu_lo << ',' << p.mu_hi << ',' << p.width() << ',' << (p.bounded ? 1 : 0) << ','
         << p.multiplicity << ',' << p.spin << '\n';
    }
    write_csv(o.plateaus, cfg, os.str());
  }
}

void run_ground(const Common& c, const GroundOpts& o, RunConfig cfg) {
  cfg.params.update({{"n-up", o.n_up}, {"n-dn", o.n_dn}, {"levels", o.levels}});
  const DeviceGraph g = five_dot_device(c);
  const SectorBasis b(static_cast<int>(g.n_dots()), o.n_up, o.n_dn);
  const SparseOperator h = assemble_hubbard(g, b);
  const DegeneracyReport rep = classify_ground_space(h, assemble_s2(b), std::min(o.levels, b.size()), solver(c));
  json result = {{"sector", {{"n_dots", g.n_dots()}, {"n_up", o.n_up}, {"n_dn", o.n_dn}, {"dim", b.size()}}},
                 {"eigenvalues", rep.spectrum.eigenvalues},
                 {"clusters", clusters_json(rep)},
                 {"gap_to_next", rep.gap_to_next},
                 {"ambiguous", rep.ambiguous},
                 {"method", rep.spectrum.method},
                 {"seed", rep.spectrum.seed}};
  write_json(c.out, cfg, result);
}

void run_heisenberg(const Common& c, const HeisenbergOpts& o, RunConfig cfg) {
  cfg.params = {{"n", o.n}, {"j", o.j}, {"cluster-tol", c.cluster_tol}};
  if (o.n < 2 || o.n > 12) throw std::invalid_argument("--n must lie in [2, 12]");
  const SparseOperator h = assemble_heisenberg(uniform_couplings(o.n, o.j), o.n);
  const Spectrum s = lowest_k_dense(h, h.dim());
  const DegeneracyReport rep = classify_spectrum(s, assemble_spin_s2(o.n), c.cluster_tol);
  json levels = json::array();
  for (const auto& cl : rep.clusters) {
    levels.push_back({{"energy", cl.mean_energy},
                      {"degeneracy", cl.multiplicity},
                      {"S", cl.spin},
                      {"formula", 0.5 * o.j * (cl.spin * (cl.spin + 1.0) - 0.75 * o.n)}});
  }
  write_json(c.out, cfg, {{"eigenvalues", s.eigenvalues}, {"levels", levels}});
}

void run_gate1(const Common& c, const Gate1Opts& o, RunConfig cfg) {
  cfg.params.update({{"pair", o.pair}, {"dt", o.dt}, {"electrons", o.electrons}, {"basis-out", o.basis_out}});
  const QubitSetup setup = encode_single_qubit(five_dot_device(c), o.electrons, solver(c));
  const EffectiveGate gate = effective_hamiltonian(setup, single_qubit_pulse(o.pair, o.dt));
  const EffectiveGate ref = effective_hamiltonian(setup, single_qubit_pulse("12", o.dt));
  json result = gate_report(gate);
  result["pair"] = o.pair;
  result["pseudofield_angle_deg"] = pseudofield_angle_deg(ref.pauli, gate.pauli);
  result["reference_pair"] = "12";
  write_json(c.out, cfg, result);
  if (!o.basis_out.empty()) write_json(o.basis_out, cfg, encoded_basis_json(setup.encoded, 1e-14));
}

json two_qubit_json(const EffectiveGate& g) {
  json r = gate_report(g);
  r["A"] = g.diagonal(0);
  r["B"] = g.diagonal(1);
  r["B_prime"] = g.diagonal(2);
  r["C"] = g.diagonal(3);
  r["coupling_contrast"] = g.diagonal(0) + g.diagonal(3) - g.diagonal(1) - g.diagonal(2);
  return r;
}

void run_gate2(const Common& c, const Gate2Opts& o, RunConfig cfg) {
  cfg.params.update({{"dt", o.dt}, {"coupling", o.coupling}, {"bonds", o.bonds}});
  const auto coupling = parse_edges(o.coupling);
  const auto bonds = o.bonds.empty() ? coupling : parse_edges(o.bonds);
  const QubitSetup two = encode_two_qubits(ten_dot_device(c, coupling), solver(c));
  write_json(c.out, cfg, two_qubit_json(effective_two_qubit(two, coupling_pulse(bonds, o.dt))));
}

void run_cphase(const Common& c, const CPhaseOpts& o, RunConfig cfg) {
  cfg.params.update({{"dt", o.dt},
                     {"coupling", o.coupling},
                     {"simulate", o.simulate},
                     {"couple-dt", o.couple_dt},
                     {"local-dt", o.local_dt},
                     {"ramp", o.ramp},
                     {"ramp-time", o.ramp_time},
                     {"nodes", o.nodes},
                     {"krylov-tol", o.krylov_tol},
                     {"substep", o.substep},
                     {"trajectory", o.trajectory},
                     {"sample", o.sample}});
  const auto coupling = parse_edges(o.coupling);
  const SolverOptions so = solver(c);
  const QubitSetup two = encode_two_qubits(ten_dot_device(c, coupling), so);
  const QubitSetup one = encode_single_qubit(five_dot(c.t, c.U, c.mu, c.center_offset), 4, so);

  const EffectiveGate h = effective_hamiltonian(one, tunneling_pulse(0, {1, 2}, o.dt));
  const EffectiveGate g = effective_two_qubit(two, coupling_pulse(coupling, o.dt));
  const CPhasePlan plan = solve_cphase(lift_to_qubit_a(h.matrix), g.matrix, lift_to_qubit_b(h.matrix));
  json result = {{"plan", cphase_plan_json(plan)}, {"coupling", two_qubit_json(g)}, {"local", gate_report(h)}};

  if (o.simulate) {
    CPhaseRealizationConfig rc;
    rc.couple_dt = o.couple_dt;
    rc.local_dt = o.local_dt;
    rc.ramp = ramp_from_string(o.ramp);
    rc.ramp_time = o.ramp_time;
    rc.quadrature_nodes = o.nodes;
    rc.coupling_edges = coupling;
    CPhaseSchedule cp = build_cphase_schedule(two, one, rc);
    cp.schedule.options.tol = o.krylov_tol;
    cp.schedule.options.ramp_substep = o.substep;
    const RealizedGate rg = realized_unitary(two, cp.schedule);
    json segments = json::array();
    for (const auto& s : cp.schedule.segments) {
      segments.push_back({{"duration", s.duration},
                          {"ramp", to_string(s.ramp)},
                          {"ramp_time", s.ramp_time},
                          {"delta", delta_to_json(s.delta)}});
    }
    result["realization"] = {{"plan", cphase_plan_json(cp.plan)},
                             {"segments", segments},
                             {"total_duration", cp.schedule.total_duration()},
                             {"matrix", matrix_to_json(rg.matrix)},
                             {"fidelity", gate_fidelity(rg.matrix, cphase_target())},
                             {"leakage", rg.leakage},
                             {"unitarity_deficit", rg.unitarity_deficit},
                             {"steps", rg.stats.steps},
                             {"matvecs", rg.stats.matvecs},
                             {"norm_drift", rg.stats.norm_drift}};
    if (!o.trajectory.empty()) {
      write_csv(o.trajectory, cfg, trajectory_csv(trajectory(two, cp.schedule, o.sample)));
    }
  }
  write_json(c.out, cfg, result);
}

void run_immunity(const Common& c, const ImmunityOpts& o, RunConfig cfg) {
  cfg.params.update({{"bz", o.bz}, {"field", o.field}});
  const ImmunityReport rep =
      local_field_immunity(five_dot_device(c), parse_list(o.bz), parse_field(o.field), solver(c));
  json points = json::array();
  for (const auto& p : rep.points) points.push_back({{"bz", p.value}, {"splitting", p.splitting}, {"e0", p.e0}});
  json pattern = json::array();
  for (const auto& [dot, w] : rep.pattern) pattern.push_back({{"dot", dot}, {"weight", w}});
  write_json(c.out, cfg, {{"pattern", pattern}, {"points", points}, {"immune", rep.immune()}});
}

void run_robust(const Common& c, const RobustOpts& o, RunConfig cfg) {
  cfg.params.update({{"kind", o.kind}, {"deltas", o.deltas}, {"J", o.J}});
  std::vector<RobustnessKind> kinds;
  if (o.kind == "both") {
    kinds = {RobustnessKind::FiveDotHubbard, RobustnessKind::FourDotHeisenberg};
  } else {
    kinds = {robustness_from_string(o.kind)};
  }
  json result = json::object();
  for (auto k : kinds) {
    const RobustnessReport rep = robustness_scan(k, parse_list(o.deltas), c.t, c.U, o.J, solver(c));
    json pts = json::array();
    for (const auto& p : rep.points) {
      pts.push_back({{"delta", p.value},
                     {"splitting", p.splitting},
                     {"e0", p.e0},
                     {"symmetry_commutator", p.symmetry_commutator},
                     {"first_order", p.first_order}});
    }
    result[to_string(k)] = pts;
  }
  write_json(c.out, cfg, result);
}

void add_common(CLI::App* app, Common& c, bool device) {
  if (device) {
    app->add_option("--device", c.device, "Device JSON file; overrides the built-in star geometry");
    app->add_option("--t", c.t, "Tunneling of the built-in device");
    app->add_option("--U", c.U, "Onsite repulsion of the built-in device");
    app->add_option("--mu", c.mu, "Onsite potential mu of every dot");
    app->add_option("--center-offset", c.center_offset, "Extra mu on the center dot(s)");
    app->add_option("--seed", c.seed, "Eigensolver start-vector seed");
    app->add_option("--tol", c.tol, "Eigensolver residual tolerance");
    app->add_option("--max-matvecs", c.max_matvecs, "Eigensolver matvec budget");
  }
  app->add_option("--cluster-tol", c.cluster_tol, "Levels closer than this form one degenerate cluster");
  app->add_option("--out", c.out, "Output file (default: stdout)");
}

std::vector<std::string> config_to_args(const RunConfig& cfg) {
  std::vector<std::string> args{cfg.command};
  if (!cfg.device.empty()) args.insert(args.end(), {"--device", cfg.device});
  if (cfg.command != "heisenberg") args.insert(args.end(), {"--seed", std::to_string(cfg.seed)});
  if (!cfg.output.empty()) args.insert(args.end(), {"--out", cfg.output});
  for (const auto& [key, value] : cfg.params.items()) {
    if (value.is_boolean()) {
      if (value.get<bool>()) args.push_back("--" + key);
    } else if (value.is_string()) {
      if (!value.get<std::string>().empty()) args.insert(args.end(), {"--" + key, value.get<std::string>()});
    } else {
      args.insert(args.end(), {"--" + key, value.dump()});
    }
  }
  return args;
}

int run(int argc, const char* const* argv);

int rerun(const std::string& file, const std::string& out) {
  std::ifstream in(file, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read '" + file + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  RunConfig cfg = parse_provenance(ss.str());
  if (!out.empty()) cfg.output = out;
  std::vector<std::string> args = config_to_args(cfg);
  args.insert(args.begin(), "pentadot");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  return run(static_cast<int>(argv.size()), argv.data());
}

int run(int argc, const char* const* argv) {
  CLI::App app{"Five-dot composite-qubit exact diagonalization"};
  app.option_defaults()->always_capture_default();
  app.require_subcommand(1);
  app.set_version_flag("--version", "pentadot 0.1.0");

  Common c;
  SweepOpts sweep;
  GroundOpts ground;
  HeisenbergOpts heis;
  Gate1Opts g1;
  Gate2Opts g2;
  CPhaseOpts cp;
  ImmunityOpts imm;
  RobustOpts rob;
  std::string rerun_file;
  std::string rerun_out;

  auto* s = app.add_subcommand("sweep", "Grand-canonical occupancy staircase (CSV)");
  add_common(s, c, true);
  s->add_option("--mu-min", sweep.mu_min, "First grid point");
  s->add_option("--mu-max", sweep.mu_max, "Last grid point");
  s->add_option("--step", sweep.step, "Grid step");
  s->add_option("--plateaus", sweep.plateaus, "Also write the refined plateau table (CSV) here");

  auto* gr = app.add_subcommand("ground", "Degeneracy and spin of the lowest levels in one sector");
  add_common(gr, c, true);
  gr->add_option("--n-up", ground.n_up, "Spin-up electrons");
  gr->add_option("--n-dn", ground.n_dn, "Spin-down electrons");
  gr->add_option("--levels", ground.levels, "Number of levels to compute");

  auto* he = app.add_subcommand("heisenberg", "Spectrum of the equal-coupling Heisenberg model");
  add_common(he, c, false);
  he->add_option("--n", heis.n, "Number of spins");
  he->add_option("--j", heis.j, "Exchange coupling J");

  auto* ga = app.add_subcommand("gate1", "Effective single-qubit Hamiltonian of a two-bond tunneling pulse");
  add_common(ga, c, true);
  ga->add_option("--pair", g1.pair, "Outer dots whose center bonds are pulsed")->check(CLI::IsMember({"12", "34", "14", "23"}));
  ga->add_option("--dt", g1.dt, "Tunneling change on each pulsed bond");
  ga->add_option("--electrons", g1.electrons, "4 or 6 electrons")->check(CLI::IsMember({4, 6}));
  ga->add_option("--basis-out", g1.basis_out, "Write the encoded basis (JSON) here");

  auto* gb = app.add_subcommand("gate2", "Effective two-qubit Hamiltonian of the coupling pulse");
  add_common(gb, c, true);
  gb->add_option("--dt", g2.dt, "Tunneling switched on across each coupling bond");
  gb->add_option("--coupling", g2.coupling, "Coupling bonds between the stars, e.g. 3-6,4-7");
  gb->add_option("--bonds", g2.bonds, "Subset of coupling bonds to pulse (default: all)");

  auto* cph = app.add_subcommand("cphase", "Controlled-phase plan and optional pulse simulation");
  add_common(cph, c, true);
  cph->add_option("--dt", cp.dt, "Pulse amplitude used for the plan");
  cph->add_option("--coupling", cp.coupling, "Coupling bonds between the stars");
  cph->add_flag("--simulate", cp.simulate, "Propagate a ramped pulse sequence and report the realized gate");
  cph->add_option("--couple-dt", cp.couple_dt, "Coupling amplitude of the simulated sequence");
  cph->add_option("--local-dt", cp.local_dt, "Local pulse amplitude of the simulated sequence");
  cph->add_option("--ramp", cp.ramp, "Ramp shape")->check(CLI::IsMember({"sudden", "linear", "cosine"}));
  cph->add_option("--ramp-time", cp.ramp_time, "Ramp time in hbar/|t|");
  cph->add_option("--nodes", cp.nodes, "Quadrature nodes for ramp phases");
  cph->add_option("--krylov-tol", cp.krylov_tol, "Krylov propagator error bound per step");
  cph->add_option("--substep", cp.substep, "Ramp sampling interval");
  cph->add_option("--trajectory", cp.trajectory, "Write a time,energy,leakage,s2 CSV here");
  cph->add_option("--sample", cp.sample, "Trajectory sampling interval");

  auto* im = app.add_subcommand("immunity", "Ground splitting of the N=4 qubit under local Zeeman fields");
  add_common(im, c, true);
  im->add_option("--bz", imm.bz, "Comma-separated field strengths");
  im->add_option("--field", imm.field, "Field pattern dot:weight,... (bz * weight on each dot)");

  auto* ro = app.add_subcommand("robust", "Single-bond robustness: five-dot Hubbard vs four-dot Heisenberg");
  add_common(ro, c, true);
  ro->add_option("--kind", rob.kind, "five-dot-hubbard, four-dot-heisenberg or both");
  ro->add_option("--deltas", rob.deltas, "Comma-separated relative bond changes");
  ro->add_option("--J", rob.J, "Heisenberg coupling");

  auto* re = app.add_subcommand("rerun", "Recompute an output from its provenance header");
  re->add_option("file", rerun_file, "CSV or JSON output of an earlier run")->required();
  re->add_option("--out", rerun_out, "Write here instead of the recorded output path");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  if (re->parsed()) return rerun(rerun_file, rerun_out);
  for (auto* sub : app.get_subcommands()) {
    const RunConfig cfg = base_config(sub->get_name(), c);
    if (sub == s) run_sweep(c, sweep, cfg);
    else if (sub == gr) run_ground(c, ground, cfg);
    else if (sub == he) run_heisenberg(c, heis, cfg);
    else if (sub == ga) run_gate1(c, g1, cfg);
    else if (sub == gb) run_gate2(c, g2, cfg);
    else if (sub == cph) run_cphase(c, cp, cfg);
    else if (sub == im) run_immunity(c, imm, cfg);
    else if (sub == ro) run_robust(c, rob, cfg);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const std::exception& e) {
    std::cerr << "pentadot: error: " << e.what() << '\n';
    return 1;
  }
}
