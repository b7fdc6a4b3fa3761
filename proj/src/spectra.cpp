#include "pentadot/spectra.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <type_traits>

namespace pentadot {

namespace {

template <typename Scalar>
using Vec = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
template <typename Scalar>
using Mat = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Scalar>
using Csr = Eigen::SparseMatrix<Scalar, Eigen::RowMajor>;

template <typename Scalar>
Vec<Scalar> random_vector(std::size_t n, std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Vec<Scalar> v(static_cast<Eigen::Index>(n));
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if constexpr (std::is_same_v<Scalar, double>) {
      v[i] = normal(rng);
    } else {
      const double re = normal(rng);
      v[i] = cplx(re, normal(rng));
    }
  }
  return v;
}

// Gram-Schmidt against the columns of `basis`, with a second pass whenever
// the first one removed most of the vector. Returns the projection
// coefficients.
template <typename Scalar>
Vec<Scalar> orthogonalize(Eigen::Ref<Vec<Scalar>> w, const Eigen::Ref<const Mat<Scalar>>& basis) {
  Vec<Scalar> coeffs = Vec<Scalar>::Zero(basis.cols());
  if (basis.cols() == 0) return coeffs;
  for (int pass = 0; pass < 2; ++pass) {
    const double before = w.norm();
    const Vec<Scalar> h = basis.adjoint() * w;
    w.noalias() -= basis * h;
    coeffs += h;
    if (w.norm() > 0.7 * before) break;
  }
  return coeffs;
}

template <typename Scalar>
struct RunResult {
  std::vector<double> values;
  Mat<Scalar> vectors;
  std::vector<double> residuals;
};

template <typename Scalar>
class LanczosRun {
 public:
  LanczosRun(const Csr<Scalar>& op, const Mat<Scalar>& locked, std::size_t want, std::size_t krylov_dim, double tol,
             std::size_t& matvecs, std::size_t max_matvecs)
      : op_(op), locked_(locked), want_(want), m_(krylov_dim), tol_(tol), matvecs_(matvecs),
        max_matvecs_(max_matvecs) {}

  RunResult<Scalar> solve(Vec<Scalar> start) {
    const auto n = op_.rows();
    const auto m = static_cast<Eigen::Index>(m_);
    Mat<Scalar> V(n, m + 1);
    Mat<Scalar> T = Mat<Scalar>::Zero(m, m);

    orthogonalize<Scalar>(start, locked_);
    start.normalize();
    V.col(0) = start;

    Eigen::Index kept = 0;
    double best = std::numeric_limits<double>::infinity();
    Vec<Scalar> w(n);
    while (true) {
      Eigen::Index size = m;
      double beta = 0.0;
      bool invariant = false;
      for (Eigen::Index j = kept; j < m; ++j) {
        if (matvecs_ >= max_matvecs_) {
          throw SolverError("Lanczos did not converge within " + std::to_string(max_matvecs_) +
                                " matrix-vector products; best residual " + std::to_string(best),
                            best);
        }
        w.noalias() = op_ * V.col(j);
        ++matvecs_;
        orthogonalize<Scalar>(w, locked_);
        const Vec<Scalar> h = orthogonalize<Scalar>(w, V.leftCols(j + 1));
        // Subtracting V brings back rounding-level locked components; left alone they grow every step.
        orthogonalize<Scalar>(w, locked_);
        T.col(j).head(j + 1) = h;
        T.row(j).head(j + 1) = h.adjoint();
        T(j, j) = std::real(h[j]);
        beta = w.norm();
        if (beta < 1e-13 * std::max(1.0, T.topLeftCorner(j + 1, j + 1).norm())) {
          invariant = true;
          size = j + 1;
          break;
        }
        V.col(j + 1) = w / beta;
        if (j + 1 < m) {
          T(j + 1, j) = beta;
          T(j, j + 1) = beta;
        }
      }

      Eigen::SelfAdjointEigenSolver<Mat<Scalar>> ritz(T.topLeftCorner(size, size));
      const Eigen::VectorXd& theta = ritz.eigenvalues();
      const Mat<Scalar>& S = ritz.eigenvectors();
      const auto need = std::min<Eigen::Index>(static_cast<Eigen::Index>(want_), size);
      std::vector<double> est(static_cast<std::size_t>(size));
      for (Eigen::Index i = 0; i < size; ++i) {
        est[static_cast<std::size_t>(i)] = invariant ? 0.0 : beta * std::abs(S(size - 1, i));
      }
      const bool done = std::all_of(est.begin(), est.begin() + need, [&](double r) { return r <= tol_; });
      best = std::min(best, *std::max_element(est.begin(), est.begin() + need));

      if (done || invariant) {
        // Lock every converged pair from the bottom up.
        Eigen::Index nconv = 0;
        while (nconv < size && est[static_cast<std::size_t>(nconv)] <= tol_) ++nconv;
        nconv = std::max(nconv, need);
        RunResult<Scalar> out;
        out.vectors = V.leftCols(size) * S.leftCols(nconv);
        for (Eigen::Index i = 0; i < nconv; ++i) {
          Vec<Scalar> y = out.vectors.col(i);
          y.normalize();
          out.vectors.col(i) = y;
          w.noalias() = op_ * y;
          const double lambda = std::real(y.dot(w));
          out.values.push_back(lambda);
          out.residuals.push_back((w - lambda * y).norm());
        }
        return out;
      }
      // Thick restart: keep the lowest Ritz vectors plus the residual direction.
      const Eigen::Index keep =
          std::min<Eigen::Index>(size - 1, need + std::max<Eigen::Index>(8, (size - need) / 3));
      const Mat<Scalar> Y = V.leftCols(size) * S.leftCols(keep);
      V.leftCols(keep) = Y;
      V.col(keep) = V.col(size);
      T.setZero();
      for (Eigen::Index i = 0; i < keep; ++i) {
        T(i, i) = theta[i];
        T(keep, i) = beta * S(size - 1, i);
        if constexpr (std::is_same_v<Scalar, double>) {
          T(i, keep) = T(keep, i);
        } else {
          T(i, keep) = std::conj(T(keep, i));
        }
      }
      kept = keep;
    }
  }

 private:
  const Csr<Scalar>& op_;
  const Mat<Scalar>& locked_;
  std::size_t want_;
  std::size_t m_;
  double tol_;
  std::size_t& matvecs_;
  std::size_t max_matvecs_;
};

Spectrum take_sorted(std::vector<double> values, const Eigen::MatrixXcd& vectors, std::vector<double> residuals,
                     std::size_t k) {
  std::vector<std::size_t> order(values.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return values[a] < values[b]; });
  Spectrum out;
  const std::size_t count = std::min(k, values.size());
  out.eigenvectors.resize(vectors.rows(), static_cast<Eigen::Index>(count));
  for (std::size_t i = 0; i < count; ++i) {
    out.eigenvalues.push_back(values[order[i]]);
    out.residuals.push_back(residuals[order[i]]);
    out.eigenvectors.col(static_cast<Eigen::Index>(i)) = vectors.col(static_cast<Eigen::Index>(order[i]));
  }
  return out;
}

}  // namespace

namespace {

template <typename Scalar>
Spectrum lanczos_driver(const Csr<Scalar>& op, std::size_t k, const SolverOptions& opts) {
  const auto n = static_cast<std::size_t>(op.rows());
  if (k > n) throw std::invalid_argument("lowest_k: k exceeds operator dimension");
  std::mt19937_64 rng(opts.seed);
  Mat<Scalar> locked(static_cast<Eigen::Index>(n), 0);
  std::vector<double> values;
  std::vector<double> residuals;
  std::size_t matvecs = 0;

  while (locked.cols() < static_cast<Eigen::Index>(n)) {
    const auto have = static_cast<std::size_t>(locked.cols());
    const std::size_t avail = n - have;
    const std::size_t want = std::min(avail, have < k ? k - have : std::size_t{1});
    std::size_t m = opts.krylov_dim ? opts.krylov_dim : std::max<std::size_t>(3 * want + 40, 80);
    m = std::min(m, avail);
    LanczosRun<Scalar> run(op, locked, want, m, opts.tol, matvecs, opts.max_matvecs);
    RunResult<Scalar> res = run.solve(random_vector<Scalar>(n, rng));

    if (have >= k) {
      std::vector<double> sorted = values;
      std::sort(sorted.begin(), sorted.end());
      const double threshold = sorted[k - 1] + opts.cluster_tol;
      if (res.values.empty() || *std::min_element(res.values.begin(), res.values.end()) > threshold) break;
    }
    const auto added = static_cast<Eigen::Index>(res.values.size());
    Mat<Scalar> grown(static_cast<Eigen::Index>(n), locked.cols() + added);
    grown << locked, res.vectors;
    locked = std::move(grown);
    values.insert(values.end(), res.values.begin(), res.values.end());
    residuals.insert(residuals.end(), res.residuals.begin(), res.residuals.end());
  }

  Spectrum out = take_sorted(std::move(values), locked.template cast<cplx>(), std::move(residuals), k);
  out.method = "lanczos";
  out.seed = opts.seed;
  out.matvecs = matvecs;
  return out;
}

bool is_real(const CsrMatrix& m) {
  for (Eigen::Index i = 0; i < m.nonZeros(); ++i) {
    if (m.valuePtr()[i].imag() != 0.0) return false;
  }
  return true;
}

template <typename Scalar>
Spectrum dense_driver(const Mat<Scalar>& dense, std::size_t k) {
  Eigen::SelfAdjointEigenSolver<Mat<Scalar>> solver(dense);
  if (solver.info() != Eigen::Success) throw SolverError("dense eigensolver failed", 0.0);
  Spectrum out;
  out.method = "dense";
  const auto count = static_cast<Eigen::Index>(k);
  const Mat<Scalar> vecs = solver.eigenvectors().leftCols(count);
  for (Eigen::Index i = 0; i < count; ++i) {
    out.eigenvalues.push_back(solver.eigenvalues()[i]);
    out.residuals.push_back((dense * vecs.col(i) - solver.eigenvalues()[i] * vecs.col(i)).norm());
  }
  out.eigenvectors = vecs.template cast<cplx>();
  return out;
}

}  // namespace

Spectrum lowest_k_dense(const SparseOperator& op, std::size_t k) {
  if (k > op.dim()) throw std::invalid_argument("lowest_k: k exceeds operator dimension");
  if (is_real(op.matrix())) return dense_driver<double>(Eigen::MatrixXd(op.matrix().real()), k);
  return dense_driver<cplx>(op.to_dense(), k);
}

Spectrum lowest_k_lanczos(const SparseOperator& op, std::size_t k, const SolverOptions& opts) {
  // Real symmetric operators run in real arithmetic; results are identical
  // up to the (irrelevant) phase of each eigenvector.
  if (is_real(op.matrix())) {
    const Csr<double> real_op = op.matrix().real();
    return lanczos_driver<double>(real_op, k, opts);
  }
  return lanczos_driver<cplx>(op.matrix(), k, opts);
}

Spectrum lowest_k(const SparseOperator& op, std::size_t k, const SolverOptions& opts) {
  if (op.dim() <= opts.dense_threshold) {
    Spectrum s = lowest_k_dense(op, k);
    s.seed = opts.seed;
    return s;
  }
  return lowest_k_lanczos(op, k, opts);
}

double spin_from_s2(double s2) { return 0.5 * (-1.0 + std::sqrt(1.0 + 4.0 * std::max(0.0, s2))); }

Eigen::MatrixXcd DegeneracyReport::ground_vectors() const {
  const auto& g = ground();
  return spectrum.eigenvectors.middleCols(static_cast<Eigen::Index>(g.start), static_cast<Eigen::Index>(g.multiplicity));
}

DegeneracyReport classify_spectrum(Spectrum spectrum, const SparseOperator& s2_op, double cluster_tol) {
  if (s2_op.dim() != static_cast<std::size_t>(spectrum.eigenvectors.rows())) {
    throw std::invalid_argument("S^2 operator acts on a different basis");
  }
  DegeneracyReport report;
  const auto& ev = spectrum.eigenvalues;
  if (ev.empty()) throw std::invalid_argument("classify_spectrum: empty spectrum");
  std::size_t start = 0;
  for (std::size_t i = 1; i <= ev.size(); ++i) {
    if (i < ev.size()) {
      const double gap = ev[i] - ev[i - 1];
      if (gap > 0.1 * cluster_tol && gap < 10.0 * cluster_tol) report.ambiguous = true;
      if (gap <= cluster_tol) continue;
    }
    LevelCluster c;
    c.start = start;
    c.multiplicity = i - start;
    c.mean_energy = std::accumulate(ev.begin() + static_cast<long>(start), ev.begin() + static_cast<long>(i), 0.0) /
                    static_cast<double>(c.multiplicity);
    c.spread = ev[i - 1] - ev[start];
    const Eigen::MatrixXcd vecs =
        spectrum.eigenvectors.middleCols(static_cast<Eigen::Index>(start), static_cast<Eigen::Index>(c.multiplicity));
    const Eigen::MatrixXcd s2_block = vecs.adjoint() * s2_op.apply(vecs);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> s2_eig(0.5 * (s2_block + s2_block.adjoint()));
    c.s2 = s2_eig.eigenvalues().mean();
    c.spin = std::round(2.0 * spin_from_s2(c.s2)) / 2.0;
    const double target = c.spin * (c.spin + 1.0);
    c.pure_spin = (s2_eig.eigenvalues().array() - target).abs().maxCoeff() < 1e-8;
    report.clusters.push_back(c);
    start = i;
  }
  report.clusters.back().complete = false;
  report.gap_to_next = report.clusters.size() > 1
                           ? ev[report.clusters[1].start] - ev[report.clusters[0].start + report.clusters[0].multiplicity - 1]
                           : std::numeric_limits<double>::infinity();
  report.spectrum = std::move(spectrum);
  return report;
}

DegeneracyReport classify_ground_space(const SparseOperator& op, const SparseOperator& s2_op, std::size_t k,
                                       const SolverOptions& opts) {
  if (op.basis_tag() != s2_op.basis_tag()) throw std::invalid_argument("S^2 operator acts on a different basis");
  Spectrum s = lowest_k(op, k, opts);
  DegeneracyReport r = classify_spectrum(std::move(s), s2_op, opts.cluster_tol);
  if (k == op.dim()) r.clusters.back().complete = true;
  return r;
}

}  // namespace pentadot
