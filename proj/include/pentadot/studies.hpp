#pragma once

#include <string>
#include <utility>
#include <vector>

#include "pentadot/model.hpp"
#include "pentadot/spectra.hpp"

namespace pentadot {

/// Lowest levels of one (N_up, N_dn) sector of a device, at the device's own mu.
struct SectorLevels {
  int n_up = 0;
  int n_dn = 0;
  std::vector<double> levels;  // ascending, up to a handful
  std::size_t ground_multiplicity = 0;
  double ground_spin = 0.0;
};

/// Sector data of a device, reused for every overall chemical potential. A
/// uniform shift mu of all dot potentials moves sector energies by -mu * N.
class SectorLadder {
 public:
  SectorLadder(const DeviceGraph& g, const SolverOptions& opts = {});

  const std::vector<SectorLevels>& sectors() const { return sectors_; }
  int n_dots() const { return n_dots_; }
  double cluster_tol() const { return cluster_tol_; }

  struct Point {
    double mu = 0.0;
    /// Winning occupation; more than one entry when sectors tie within cluster_tol.
    std::vector<int> n;
    double e0 = 0.0;
    std::size_t multiplicity = 0;
    double spin = 0.0;
    /// Distance to the next grand-canonical level.
    double gap = 0.0;
  };

  Point at(double mu) const;
  /// Occupation of the lowest state (smallest N on ties).
  int occupation(double mu) const;

 private:
  int n_dots_ = 0;
  double cluster_tol_ = 1e-7;
  std::vector<SectorLevels> sectors_;
};

struct Plateau {
  int n = 0;
  double mu_lo = 0.0;
  double mu_hi = 0.0;
  /// False for plateaus that run off either end of the grid.
  bool bounded = true;
  std::size_t multiplicity = 0;
  double spin = 0.0;

  double width() const { return mu_hi - mu_lo; }
};

struct StaircaseTable {
  std::vector<SectorLadder::Point> rows;
  /// Plateaus in grid order with bisection-refined edges.
  std::vector<Plateau> plateaus;

  const Plateau* plateau(int n) const;
};

/// Ascending grid lo, lo + step, ... up to hi (inclusive within step/1e6).
std::vector<double> mu_grid(double lo, double hi, double step);

inline constexpr double kPlateauEdgeTol = 1e-6;

StaircaseTable occupancy_staircase(const DeviceGraph& g, const std::vector<double>& grid, const SolverOptions& opts = {});
StaircaseTable occupancy_staircase(const SectorLadder& ladder, const std::vector<double>& grid);

/// CSV with header `mu,N,E0,multiplicity,S,gap`; tied occupations are joined with '|'.
std::string staircase_csv(const StaircaseTable& table);

struct SymmetryReport {
  std::size_t checked = 0;
  /// (mu, N(mu) + N(U - mu)) for every interior point that breaks the identity.
  std::vector<std::pair<double, int>> mismatches;
  bool holds() const { return checked > 0 && mismatches.empty(); }
};

/// Checks N(mu) + N(U - mu) = 2 n_dots at grid points inside plateaus (at
/// least `margin` from both edges).
SymmetryReport ph_symmetry_check(const SectorLadder& ladder, const StaircaseTable& table, double U,
                                 double margin = 1e-3);

struct SplittingPoint {
  double value = 0.0;
  /// E1 - E0 of the two lowest levels in the N = 4 (2,2) sector.
  double splitting = 0.0;
  double e0 = 0.0;
  /// Largest ||[H, P]|| over the symmetry checks attached to the scan (0 if none).
  double symmetry_commutator = 0.0;
  /// First-order prediction, filled by the Heisenberg scan.
  double first_order = 0.0;
};

struct ImmunityReport {
  std::vector<std::pair<int, double>> pattern;
  std::vector<SplittingPoint> points;
  bool immune(double threshold = 1e-9) const;
};

/// Zeeman field bz * weight on each (dot, weight) of the pattern, applied to
/// the idle device, N = 4 sector (2,2).
ImmunityReport local_field_immunity(const DeviceGraph& g, const std::vector<double>& bz_values,
                                    const std::vector<std::pair<int, double>>& pattern = {{1, 1.0}},
                                    const SolverOptions& opts = {});

enum class RobustnessKind { FiveDotHubbard, FourDotHeisenberg };

std::string to_string(RobustnessKind k);
RobustnessKind robustness_from_string(const std::string& s);

struct RobustnessReport {
  RobustnessKind kind = RobustnessKind::FiveDotHubbard;
  std::vector<SplittingPoint> points;
};

/// Relative change delta on one bond: edge 0-1 of five_dot(t, U, 0) with
/// t -> t (1 + delta), or bond (0,1) of the uniform 4-spin Heisenberg model
/// with J -> J (1 + delta). For the five-dot case the commutator with the
/// exchange of the three untouched outer dots is recorded; for the Heisenberg
/// case the first-order splitting delta * J * spread(S_0.S_1 on the singlets).
RobustnessReport robustness_scan(RobustnessKind kind, const std::vector<double>& rel_deltas, double t = -1.0,
                                 double U = 8.0, double J = 1.0, const SolverOptions& opts = {});

}  // namespace pentadot
