#pragma once

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "pentadot/operators.hpp"

namespace pentadot {

struct SolverOptions {
  /// Residual bound ||Hv - lambda v|| for every returned pair.
  double tol = 1e-10;
  /// Operators up to this dimension are diagonalized densely.
  std::size_t dense_threshold = 2000;
  /// Krylov basis size per restart cycle; 0 picks one from k.
  std::size_t krylov_dim = 0;
  std::size_t max_matvecs = 400000;
  std::uint64_t seed = 20031;
  /// Levels closer than this are treated as one degenerate cluster.
  double cluster_tol = 1e-7;
};

struct Spectrum {
  std::vector<double> eigenvalues;   // ascending
  Eigen::MatrixXcd eigenvectors;     // orthonormal columns
  std::vector<double> residuals;     // ||Hv - lambda v|| per pair
  std::string method;                // "dense" or "lanczos"
  std::uint64_t seed = 0;
  std::size_t matvecs = 0;
};

class SolverError : public std::runtime_error {
 public:
  SolverError(const std::string& what, double best_residual)
      : std::runtime_error(what), best_residual_(best_residual) {}
  double best_residual() const { return best_residual_; }

 private:
  double best_residual_;
};

/// k lowest eigenpairs. Dense for dim <= dense_threshold, Lanczos otherwise.
Spectrum lowest_k(const SparseOperator& op, std::size_t k, const SolverOptions& opts = {});

Spectrum lowest_k_dense(const SparseOperator& op, std::size_t k);

/// Thick-restart Lanczos with full reorthogonalization. Converged pairs are
/// locked and later runs restart from fresh random vectors orthogonal to the
/// locked set, so every copy of a degenerate level is found. The search stops
/// once a fresh run finds nothing at or below the k-th locked level.
Spectrum lowest_k_lanczos(const SparseOperator& op, std::size_t k, const SolverOptions& opts = {});

struct LevelCluster {
  std::size_t start = 0;
  std::size_t multiplicity = 0;
  double mean_energy = 0.0;
  double spread = 0.0;
  /// Mean <S^2> over the cluster, and the spin S it corresponds to.
  double s2 = 0.0;
  double spin = 0.0;
  /// All S^2 eigenvalues inside the cluster sit within 1e-8 of one S(S+1).
  bool pure_spin = false;
  /// False for the top cluster when it may continue past the k computed levels.
  bool complete = true;
};

struct DegeneracyReport {
  std::vector<LevelCluster> clusters;
  /// Distance from the top of the ground cluster to the next level.
  double gap_to_next = 0.0;
  /// Set when some level spacing is within a decade of cluster_tol.
  bool ambiguous = false;
  Spectrum spectrum;

  const LevelCluster& ground() const { return clusters.front(); }
  /// Orthonormal columns spanning the ground cluster.
  Eigen::MatrixXcd ground_vectors() const;
};

/// Groups the k lowest levels into clusters and labels each with S.
DegeneracyReport classify_spectrum(Spectrum spectrum, const SparseOperator& s2_op, double cluster_tol);

DegeneracyReport classify_ground_space(const SparseOperator& op, const SparseOperator& s2_op, std::size_t k,
                                       const SolverOptions& opts = {});

/// S from an S(S+1) value.
double spin_from_s2(double s2);

}  // namespace pentadot
