#include "pentadot/studies.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "pentadot/fock.hpp"
#include "pentadot/operators.hpp"

namespace pentadot {

namespace {

constexpr std::size_t kLevelsPerSector = 8;

double lowest_splitting(const SparseOperator& h, const SolverOptions& opts, double* e0) {
  const Spectrum s = lowest_k(h, 2, opts);
  if (e0) *e0 = s.eigenvalues[0];
  return s.eigenvalues[1] - s.eigenvalues[0];
}

}  // namespace

SectorLadder::SectorLadder(const DeviceGraph& g, const SolverOptions& opts)
    : n_dots_(static_cast<int>(g.n_dots())), cluster_tol_(opts.cluster_tol) {
  for (int up = 0; up <= n_dots_; ++up) {
    for (int dn = 0; dn <= n_dots_; ++dn) {
      SectorBasis b(n_dots_, up, dn);
      const SparseOperator h = assemble_hubbard(g, b);
      const SparseOperator s2 = assemble_s2(b);
      const std::size_t k = std::min(b.size(), kLevelsPerSector);
      const DegeneracyReport rep = classify_ground_space(h, s2, k, opts);
      SectorLevels lv;
      lv.n_up = up;
      lv.n_dn = dn;
      lv.levels = rep.spectrum.eigenvalues;
      lv.ground_multiplicity = rep.ground().multiplicity;
      lv.ground_spin = rep.ground().spin;
      sectors_.push_back(std::move(lv));
    }
  }
}

SectorLadder::Point SectorLadder::at(double mu) const {
  Point p;
  p.mu = mu;
  double best = std::numeric_limits<double>::infinity();
  for (const auto& s : sectors_) best = std::min(best, s.levels.front() - mu * (s.n_up + s.n_dn));
  p.e0 = best;
  double next = std::numeric_limits<double>::infinity();
  for (const auto& s : sectors_) {
    const int n = s.n_up + s.n_dn;
    for (double lvl : s.levels) {
      const double e = lvl - mu * n;
      if (e - best <= cluster_tol_) {
        if (std::find(p.n.begin(), p.n.end(), n) == p.n.end()) p.n.push_back(n);
      } else {
        next = std::min(next, e);
      }
    }
    if (s.levels.front() - mu * n - best <= cluster_tol_) {
      p.multiplicity += s.ground_multiplicity;
      p.spin = std::max(p.spin, s.ground_spin);
    }
  }
  std::sort(p.n.begin(), p.n.end());
  p.gap = next - best;
  return p;
}

int SectorLadder::occupation(double mu) const { return at(mu).n.front(); }

const Plateau* StaircaseTable::plateau(int n) const {
  for (const auto& p : plateaus) {
    if (p.n == n) return &p;
  }
  return nullptr;
}

std::vector<double> mu_grid(double lo, double hi, double step) {
  if (!(step > 0.0) || hi < lo) throw std::invalid_argument("mu grid needs step > 0 and hi >= lo");
  std::vector<double> out;
  const auto count = static_cast<long>(std::floor((hi - lo) / step + 1e-6));
  for (long k = 0; k <= count; ++k) out.push_back(lo + static_cast<double>(k) * step);
  return out;
}

StaircaseTable occupancy_staircase(const DeviceGraph& g, const std::vector<double>& grid, const SolverOptions& opts) {
  return occupancy_staircase(SectorLadder(g, opts), grid);
}

StaircaseTable occupancy_staircase(const SectorLadder& ladder, const std::vector<double>& grid) {
  if (grid.empty()) throw std::invalid_argument("empty mu grid");
  if (!std::is_sorted(grid.begin(), grid.end())) throw std::invalid_argument("mu grid must be ascending");
  StaircaseTable table;
  for (double mu : grid) table.rows.push_back(ladder.at(mu));

  // Edge between grid points a < b with N(a) < N(b): bisect to kPlateauEdgeTol.
  auto refine = [&](double a, double b) {
    const int na = ladder.occupation(a);
    while (b - a > kPlateauEdgeTol) {
      const double m = 0.5 * (a + b);
      if (ladder.occupation(m) == na) a = m;
      else b = m;
    }
    return 0.5 * (a + b);
  };

  Plateau cur;
  cur.n = table.rows.front().n.front();
  cur.mu_lo = grid.front();
  cur.bounded = false;
  for (std::size_t k = 1; k < grid.size(); ++k) {
    const int n = table.rows[k].n.front();
    double a = grid[k - 1];
    // Several occupations may change inside one grid cell; walk through each edge.
    while (cur.n != n) {
      const double edge = refine(a, grid[k]);
      cur.mu_hi = edge;
      table.plateaus.push_back(cur);
      cur = Plateau{};
      a = std::min(edge + kPlateauEdgeTol, grid[k]);
      cur.n = a == grid[k] ? n : ladder.occupation(a);
      cur.mu_lo = edge;
    }
  }
  cur.mu_hi = grid.back();
  cur.bounded = false;
  table.plateaus.push_back(cur);
  // A grid end sitting exactly on a tie leaves a sliver of bisection width.
  auto& ps = table.plateaus;
  if (ps.size() > 1 && ps.front().width() <= 2.0 * kPlateauEdgeTol) {
    ps.erase(ps.begin());
    ps.front().mu_lo = grid.front();
  }
  if (ps.size() > 1 && ps.back().width() <= 2.0 * kPlateauEdgeTol) {
    ps.pop_back();
    ps.back().mu_hi = grid.back();
  }
  ps.front().bounded = false;
  ps.back().bounded = false;
  // Multiplicity and spin from the plateau midpoint, away from edge ties.
  for (auto& p : table.plateaus) {
    const SectorLadder::Point mid = ladder.at(0.5 * (p.mu_lo + p.mu_hi));
    p.multiplicity = mid.multiplicity;
    p.spin = mid.spin;
  }
  return table;
}

std::string staircase_csv(const StaircaseTable& table) {
  std::ostringstream os;
  os.precision(12);
  os << "mu,N,E0,multiplicity,S,gap\n";
  for (const auto& r : table.rows) {
    os << r.mu << ',';
    for (std::size_t k = 0; k < r.n.size(); ++k) os << (k ? "|" : "") << r.n[k];
    os << ',' << r.e0 << ',' << r.multiplicity << ',' << r.spin << ',' << r.gap << '\n';
  }
  return os.str();
}

SymmetryReport ph_symmetry_check(const SectorLadder& ladder, const StaircaseTable& table, double U, double margin) {
  SymmetryReport rep;
  const int full = 2 * ladder.n_dots();
  for (const auto& row : table.rows) {
    const Plateau* inside = nullptr;
    for (const auto& p : table.plateaus) {
      if (row.mu > p.mu_lo + margin && row.mu < p.mu_hi - margin) inside = &p;
    }
    if (!inside || !inside->bounded) continue;
    const double mirror = U - row.mu;
    const int sum = row.n.front() + ladder.occupation(mirror);
    ++rep.checked;
    if (sum != full) rep.mismatches.emplace_back(row.mu, sum);
  }
  return rep;
}

bool ImmunityReport::immune(double threshold) const {
  return std::all_of(points.begin(), points.end(), [&](const SplittingPoint& p) { return p.splitting < threshold; });
}

ImmunityReport local_field_immunity(const DeviceGraph& g, const std::vector<double>& bz_values,
                                    const std::vector<std::pair<int, double>>& pattern, const SolverOptions& opts) {
  if (pattern.empty()) throw std::invalid_argument("field pattern is empty");
  ImmunityReport rep;
  rep.pattern = pattern;
  SectorBasis b(static_cast<int>(g.n_dots()), 2, 2);
  for (double bz : bz_values) {
    DeviceDelta d;
    for (auto [dot, w] : pattern) d.site_deltas[dot].bz += bz * w;
    const SparseOperator h = assemble_hubbard(apply_delta(g, d), b);
    SplittingPoint p;
    p.value = bz;
    p.splitting = lowest_splitting(h, opts, &p.e0);
    rep.points.push_back(p);
  }
  return rep;
}

std::string to_string(RobustnessKind k) {
  return k == RobustnessKind::FiveDotHubbard ? "five-dot-hubbard" : "four-dot-heisenberg";
}

RobustnessKind robustness_from_string(const std::string& s) {
  if (s == "five-dot-hubbard") return RobustnessKind::FiveDotHubbard;
  if (s == "four-dot-heisenberg") return RobustnessKind::FourDotHeisenberg;
  throw std::invalid_argument("unknown robustness kind '" + s + "' (five-dot-hubbard|four-dot-heisenberg)");
}

RobustnessReport robustness_scan(RobustnessKind kind, const std::vector<double>& rel_deltas, double t, double U,
                                 double J, const SolverOptions& opts) {
  RobustnessReport rep;
  rep.kind = kind;
  if (kind == RobustnessKind::FiveDotHubbard) {
    const DeviceGraph g = five_dot(t, U, 0.0);
    SectorBasis b(5, 2, 2);
    const SparseOperator p23 = permutation_operator(transposition(5, 2, 3), b);
    const SparseOperator p34 = permutation_operator(transposition(5, 3, 4), b);
    for (double delta : rel_deltas) {
      DeviceDelta d;
      d.edge_deltas[EdgeKey(0, 1)] = delta * t;
      const SparseOperator h = assemble_hubbard(apply_delta(g, d), b);
      SplittingPoint p;
      p.value = delta;
      p.splitting = lowest_splitting(h, opts, &p.e0);
      p.symmetry_commutator = std::max(commutator_norm(h, p23), commutator_norm(h, p34));
      rep.points.push_back(p);
    }
    return rep;
  }

  const SparseOperator bond = assemble_heisenberg({{{0, 1}, 1.0}}, 4);
  const SparseOperator idle = assemble_heisenberg(uniform_couplings(4, J), 4);
  const Spectrum base = lowest_k_dense(idle, 2);
  const Eigen::MatrixXcd proj = base.eigenvectors.adjoint() * bond.apply(base.eigenvectors);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(0.5 * (proj + proj.adjoint()));
  const double spread = eig.eigenvalues()(1) - eig.eigenvalues()(0);
  for (double delta : rel_deltas) {
    CouplingMap couplings = uniform_couplings(4, J);
    couplings[{0, 1}] = J * (1.0 + delta);
    SplittingPoint p;
    p.value = delta;
    p.splitting = lowest_splitting(assemble_heisenberg(couplings, 4), opts, &p.e0);
    p.first_order = std::abs(delta * J) * spread;
    rep.points.push_back(p);
  }
  return rep;
}

}  // namespace pentadot
