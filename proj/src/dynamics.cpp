#include "pentadot/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace pentadot {

namespace {

using RealCsr = Eigen::SparseMatrix<double, Eigen::RowMajor>;

bool is_real(const CsrMatrix& m) {
  for (Eigen::Index k = 0; k < m.nonZeros(); ++k) {
    if (m.valuePtr()[k].imag() != 0.0) return false;
  }
  return true;
}

using Block = Eigen::Matrix<cplx, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

// y (+)= scale * a * x for a real CSR matrix and row-major blocks of `width` doubles per row.
void csr_apply(const RealCsr& a, double scale, const double* x, double* y, Eigen::Index width, bool accumulate) {
  const auto* outer = a.outerIndexPtr();
  const auto* inner = a.innerIndexPtr();
  const double* val = a.valuePtr();
  std::vector<double> acc(static_cast<std::size_t>(width));
  for (Eigen::Index r = 0; r < a.rows(); ++r) {
    std::fill(acc.begin(), acc.end(), 0.0);
    for (auto k = outer[r]; k < outer[r + 1]; ++k) {
      const double v = val[k];
      const double* xr = x + static_cast<Eigen::Index>(inner[k]) * width;
      for (Eigen::Index w = 0; w < width; ++w) acc[static_cast<std::size_t>(w)] += v * xr[w];
    }
    double* yr = y + r * width;
    if (accumulate) {
      for (Eigen::Index w = 0; w < width; ++w) yr[w] += scale * acc[static_cast<std::size_t>(w)];
    } else {
      for (Eigen::Index w = 0; w < width; ++w) yr[w] = scale * acc[static_cast<std::size_t>(w)];
    }
  }
}

/// H0 + f * dH applied to row-major column blocks. Real matrices act on the
/// interleaved real and imaginary parts directly.
class LinearHamiltonian {
 public:
  LinearHamiltonian(const SparseOperator& h0, const SparseOperator& dh) : h0_(h0.matrix()), dh_(dh.matrix()) {
    real_ = is_real(h0_) && is_real(dh_);
    if (real_) {
      h0r_ = h0_.real();
      dhr_ = dh_.real();
    }
    has_dh_ = dh_.nonZeros() > 0;
  }

  void set_envelope(double f) { f_ = f; }
  double envelope() const { return f_; }

  void apply(const Block& v, Block& out) const {
    out.resize(v.rows(), v.cols());
    if (real_) {
      const auto* x = reinterpret_cast<const double*>(v.data());
      auto* y = reinterpret_cast<double*>(out.data());
      csr_apply(h0r_, 1.0, x, y, 2 * v.cols(), false);
      if (has_dh_ && f_ != 0.0) csr_apply(dhr_, f_, x, y, 2 * v.cols(), true);
      return;
    }
    out.noalias() = h0_ * v;
    if (has_dh_ && f_ != 0.0) out.noalias() += cplx(f_) * (dh_ * v);
  }

 private:
  CsrMatrix h0_;
  CsrMatrix dh_;
  RealCsr h0r_;
  RealCsr dhr_;
  bool real_ = false;
  bool has_dh_ = false;
  double f_ = 0.0;
};

/// Krylov vectors reused across steps.
struct KrylovWorkspace {
  std::vector<Block> q;
  Block w;
};

constexpr int kMinKrylov = 4;

/// One short-time Lanczos step on every column at once; returns the time advanced.
double krylov_step(LinearHamiltonian& h, KrylovWorkspace& ws, Block& v, double remaining, double hint,
                   const PropagatorOptions& opts, PropagationStats& stats) {
  const Eigen::Index n = v.rows();
  const Eigen::Index c = v.cols();
  const int m = static_cast<int>(std::min<Eigen::Index>(opts.krylov_dim, n));
  const Eigen::VectorXd beta0 = v.colwise().norm().transpose();

  std::vector<Block>& q = ws.q;
  if (q.size() < static_cast<std::size_t>(m)) q.resize(static_cast<std::size_t>(m));
  q[0] = v;
  for (Eigen::Index k = 0; k < c; ++k) q[0].col(k) /= beta0(k);
  Eigen::MatrixXd alpha = Eigen::MatrixXd::Zero(m, c);
  Eigen::MatrixXd beta = Eigen::MatrixXd::Zero(m, c);
  std::vector<int> size(static_cast<std::size_t>(c), m);
  std::vector<bool> done(static_cast<std::size_t>(c), false);

  std::vector<Eigen::MatrixXd> vecs(static_cast<std::size_t>(c));
  std::vector<Eigen::VectorXd> vals(static_cast<std::size_t>(c));
  // Diagonalizes the tridiagonal of each column truncated to `dim` vectors.
  auto diagonalize = [&](int dim) {
    for (Eigen::Index k = 0; k < c; ++k) {
      const auto kk = static_cast<std::size_t>(k);
      if (!done[kk]) size[kk] = dim;
      const int s = size[kk];
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig;
      Eigen::VectorXd diag = alpha.col(k).head(s);
      Eigen::VectorXd off = beta.col(k).head(std::max(s - 1, 0));
      eig.computeFromTridiagonal(diag, off, Eigen::ComputeEigenvectors);
      vecs[kk] = eig.eigenvectors();
      vals[kk] = eig.eigenvalues();
    }
  };
  auto coeffs = [&](Eigen::Index k, double tau) {
    const auto& s = vecs[static_cast<std::size_t>(k)];
    const auto& th = vals[static_cast<std::size_t>(k)];
    Eigen::VectorXcd phase(th.size());
    for (Eigen::Index i = 0; i < th.size(); ++i) phase(i) = std::polar(1.0, -th(i) * tau) * s(0, i);
    return Eigen::VectorXcd(s.cast<cplx>() * phase);
  };
  auto error = [&](double tau) {
    double worst = 0.0;
    for (Eigen::Index k = 0; k < c; ++k) {
      if (done[static_cast<std::size_t>(k)]) continue;
      const int s = size[static_cast<std::size_t>(k)];
      worst = std::max(worst, beta0(k) * beta(s - 1, k) * std::abs(coeffs(k, tau)(s - 1)));
    }
    return worst;
  };

  int used = 0;
  std::vector<double> a(static_cast<std::size_t>(c));
  std::vector<double> b(static_cast<std::size_t>(c));
  std::vector<double> prev(static_cast<std::size_t>(c));
  std::vector<double> scale(static_cast<std::size_t>(c));
  for (int j = 0; j < m; ++j) {
    Block& w = j + 1 < m ? q[static_cast<std::size_t>(j + 1)] : ws.w;
    h.apply(q[static_cast<std::size_t>(j)], w);
    stats.matvecs += static_cast<std::size_t>(c);
    const cplx* qj = q[static_cast<std::size_t>(j)].data();
    const cplx* qp = j > 0 ? q[static_cast<std::size_t>(j - 1)].data() : nullptr;
    cplx* wd = w.data();
    const Eigen::Index len = n * c;
    std::fill(a.begin(), a.end(), 0.0);
    for (Eigen::Index i = 0; i < len; ++i) a[static_cast<std::size_t>(i % c)] += (std::conj(qj[i]) * wd[i]).real();
    for (Eigen::Index k = 0; k < c; ++k) prev[static_cast<std::size_t>(k)] = j > 0 ? beta(j - 1, k) : 0.0;
    std::fill(b.begin(), b.end(), 0.0);
    for (Eigen::Index i = 0; i < len; ++i) {
      const auto k = static_cast<std::size_t>(i % c);
      cplx x = wd[i] - a[k] * qj[i];
      if (qp) x -= prev[k] * qp[i];
      wd[i] = x;
      b[k] += std::norm(x);
    }
    for (Eigen::Index k = 0; k < c; ++k) {
      const auto kk = static_cast<std::size_t>(k);
      const double bk = std::sqrt(b[kk]);
      alpha(j, k) = a[kk];
      beta(j, k) = bk;
      scale[kk] = 0.0;
      if (done[kk]) {
        beta(j, k) = 0.0;
      } else if (bk <= 1e-12 * std::max(1.0, std::abs(a[kk]))) {
        // Invariant subspace: the step is exact for any duration.
        done[kk] = true;
        size[kk] = j + 1;
        beta(j, k) = 0.0;
      } else {
        scale[kk] = 1.0 / bk;
      }
    }
    for (Eigen::Index i = 0; i < len; ++i) wd[i] *= scale[static_cast<std::size_t>(i % c)];
    used = j + 1;
    if (used >= kMinKrylov && used < m) {
      diagonalize(used);
      if (error(std::min(remaining, hint)) <= opts.tol) break;
    }
  }
  diagonalize(used);

  double tau = std::min(remaining, hint);
  while (error(tau) > opts.tol) {
    tau *= 0.7;
    if (tau < 1e-14 * std::max(1.0, remaining)) throw PropagationError("Krylov step size underflow");
  }
  Eigen::MatrixXcd y = Eigen::MatrixXcd::Zero(m, c);
  for (Eigen::Index k = 0; k < c; ++k) {
    const Eigen::VectorXcd yk = coeffs(k, tau);
    y.col(k).head(yk.size()) = beta0(k) * yk;
  }
  v.setZero();
  cplx* vd = v.data();
  for (int j = 0; j < used; ++j) {
    const cplx* qj = q[static_cast<std::size_t>(j)].data();
    for (Eigen::Index r = 0; r < n; ++r) {
      for (Eigen::Index k = 0; k < c; ++k) vd[r * c + k] += y(j, k) * qj[r * c + k];
    }
  }
  ++stats.steps;
  return tau;
}

struct Piece {
  double start = 0.0;
  double length = 0.0;
  double envelope = 0.0;
};

std::vector<Piece> pieces_of(const PulseSegment& seg, double substep) {
  std::vector<Piece> out;
  const double tr = seg.ramp == RampShape::Sudden ? 0.0 : seg.ramp_time;
  if (tr <= 0.0) {
    out.push_back({0.0, seg.duration, 1.0});
    return out;
  }
  const int n = std::max(1, static_cast<int>(std::ceil(tr / substep - 1e-12)));
  const double h = tr / n;
  for (int k = 0; k < n; ++k) out.push_back({k * h, h, ramp_profile(seg.ramp, (k + 0.5) / n)});
  if (seg.duration - 2.0 * tr > 0.0) out.push_back({tr, seg.duration - 2.0 * tr, 1.0});
  for (int k = 0; k < n; ++k) {
    out.push_back({seg.duration - tr + k * h, h, ramp_profile(seg.ramp, 1.0 - (k + 0.5) / n)});
  }
  return out;
}

}  // namespace

std::string to_string(RampShape r) {
  switch (r) {
    case RampShape::Sudden: return "sudden";
    case RampShape::Linear: return "linear";
    case RampShape::Cosine: return "cosine";
  }
  return "cosine";
}

RampShape ramp_from_string(const std::string& s) {
  if (s == "sudden") return RampShape::Sudden;
  if (s == "linear") return RampShape::Linear;
  if (s == "cosine") return RampShape::Cosine;
  throw std::invalid_argument("unknown ramp shape '" + s + "' (sudden|linear|cosine)");
}

double ramp_profile(RampShape r, double s) {
  s = std::clamp(s, 0.0, 1.0);
  switch (r) {
    case RampShape::Sudden: return 1.0;
    case RampShape::Linear: return s;
    case RampShape::Cosine: return 0.5 * (1.0 - std::cos(std::numbers::pi * s));
  }
  return 1.0;
}

double PulseSegment::envelope(double t) const {
  if (ramp == RampShape::Sudden || ramp_time <= 0.0) return 1.0;
  if (t < ramp_time) return ramp_profile(ramp, t / ramp_time);
  if (t > duration - ramp_time) return ramp_profile(ramp, (duration - t) / ramp_time);
  return 1.0;
}

double PulseSchedule::total_duration() const {
  double total = 0.0;
  for (const auto& s : segments) total += s.duration;
  return total;
}

void PulseSchedule::validate() const {
  for (const auto& s : segments) {
    if (!(s.duration > 0.0)) throw std::invalid_argument("segment duration must be positive");
    if (s.ramp_time < 0.0 || (s.ramp != RampShape::Sudden && s.ramp_time > 0.5 * s.duration * (1.0 + 1e-12))) {
      throw std::invalid_argument("ramp_time must lie in [0, duration/2]");
    }
  }
  if (!(options.tol > 0.0) || options.krylov_dim < 2 || !(options.ramp_substep > 0.0)) {
    throw std::invalid_argument("invalid propagator options");
  }
}

Eigen::MatrixXcd propagate(const Eigen::MatrixXcd& states, const DeviceGraph& g, const SectorBasis& b,
                           const PulseSchedule& sched, PropagationStats* stats_out, const Observer& observer,
                           double sample_interval) {
  sched.validate();
  if (states.rows() != static_cast<Eigen::Index>(b.size())) throw std::invalid_argument("state size does not match sector");
  const SparseOperator h0 = assemble_hubbard(g, b);
  PropagationStats stats;
  Block v = states;
  auto observe = [&](double time, std::size_t seg, double env) {
    const Eigen::MatrixXcd snap = v;
    observer(ObserverState{time, seg, env, snap});
  };
  const bool sampling = observer && sample_interval > 0.0;
  double next_sample = sample_interval;
  double clock = 0.0;
  if (observer) observe(0.0, 0, sched.segments.empty() ? 0.0 : sched.segments[0].envelope(0.0));

  for (std::size_t si = 0; si < sched.segments.size(); ++si) {
    const PulseSegment& seg = sched.segments[si];
    LinearHamiltonian h(h0, assemble_hubbard_delta(g, seg.delta, b));
    KrylovWorkspace ws;
    double hint = 1.0;
    for (const Piece& p : pieces_of(seg, sched.options.ramp_substep)) {
      h.set_envelope(p.envelope);
      double done = 0.0;
      while (done < p.length) {
        double remaining = p.length - done;
        const double abs_now = clock + p.start + done;
        bool hits_sample = false;
        if (sampling && next_sample < abs_now + remaining - 1e-12) {
          remaining = next_sample - abs_now;
          hits_sample = true;
        }
        const double tau = krylov_step(h, ws, v, remaining, std::max(hint, 1e-3), sched.options, stats);
        hint = tau < remaining ? tau * 1.25 : std::max(hint, tau);
        done += tau;
        if (stats.steps > sched.options.max_steps) throw PropagationError("propagation exceeded the step budget");
        if (hits_sample && tau >= remaining) {
          observe(next_sample, si, h.envelope());
          next_sample += sample_interval;
        }
      }
    }
    clock += seg.duration;
  }
  if (observer && !sched.segments.empty()) {
    observe(clock, sched.segments.size() - 1, sched.segments.back().envelope(sched.segments.back().duration));
  }
  for (Eigen::Index k = 0; k < v.cols(); ++k) {
    stats.norm_drift = std::max(stats.norm_drift, std::abs(v.col(k).norm() - states.col(k).norm()));
  }
  if (stats_out) *stats_out = stats;
  return Eigen::MatrixXcd(v);
}

RealizedGate realized_unitary(const QubitSetup& setup, const PulseSchedule& sched) {
  const Eigen::MatrixXcd& basis = setup.encoded.vectors;
  RealizedGate out;
  const Eigen::MatrixXcd evolved = propagate(basis, setup.device, setup.basis, sched, &out.stats);
  out.matrix = basis.adjoint() * evolved;
  double kept = 1.0;
  for (Eigen::Index k = 0; k < out.matrix.cols(); ++k) kept = std::min(kept, out.matrix.col(k).squaredNorm());
  out.leakage = 1.0 - kept;
  out.unitarity_deficit =
      (out.matrix.adjoint() * out.matrix - Eigen::MatrixXcd::Identity(out.matrix.cols(), out.matrix.cols())).norm();
  return out;
}

std::vector<TrajectorySample> trajectory(const QubitSetup& setup, const PulseSchedule& sched, double sample_interval) {
  const Eigen::MatrixXcd& basis = setup.encoded.vectors;
  std::vector<SparseOperator> deltas;
  for (const auto& seg : sched.segments) deltas.push_back(assemble_hubbard_delta(setup.device, seg.delta, setup.basis));
  const SparseOperator h0 = assemble_hubbard(setup.device, setup.basis);
  std::vector<TrajectorySample> out;
  auto record = [&](const ObserverState& st) {
    TrajectorySample s;
    s.time = st.time;
    const Eigen::MatrixXcd overlap = basis.adjoint() * st.states;
    double kept = 1.0;
    for (Eigen::Index k = 0; k < st.states.cols(); ++k) {
      const Eigen::VectorXcd col = st.states.col(k);
      double e = h0.expectation(col);
      if (!deltas.empty()) e += st.envelope * deltas[st.segment].expectation(col);
      s.energy += e / static_cast<double>(st.states.cols());
      s.s2 = std::max(s.s2, setup.s2.expectation(col));
      kept = std::min(kept, overlap.col(k).squaredNorm());
    }
    s.leakage = 1.0 - kept;
    out.push_back(s);
  };
  propagate(basis, setup.device, setup.basis, sched, nullptr, record, sample_interval);
  return out;
}

std::string trajectory_csv(const std::vector<TrajectorySample>& samples) {
  std::ostringstream os;
  os.precision(12);
  os << "time,energy,leakage,s2\n";
  for (const auto& s : samples) os << s.time << ',' << s.energy << ',' << s.leakage << ',' << s.s2 << '\n';
  return os.str();
}

void gauss_legendre(int n, std::vector<double>& nodes, std::vector<double>& weights) {
  if (n < 1) throw std::invalid_argument("quadrature needs at least one node");
  // Golub-Welsch on the Legendre Jacobi matrix, mapped from [-1, 1] to [0, 1].
  Eigen::VectorXd diag = Eigen::VectorXd::Zero(n);
  Eigen::VectorXd off(std::max(n - 1, 0));
  for (int k = 1; k < n; ++k) off(k - 1) = k / std::sqrt(4.0 * k * k - 1.0);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig;
  eig.computeFromTridiagonal(diag, off, Eigen::ComputeEigenvectors);
  nodes.resize(static_cast<std::size_t>(n));
  weights.resize(static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k) {
    nodes[static_cast<std::size_t>(k)] = 0.5 * (eig.eigenvalues()(k) + 1.0);
    weights[static_cast<std::size_t>(k)] = eig.eigenvectors()(0, k) * eig.eigenvectors()(0, k);
  }
}

Eigen::MatrixXcd ramp_average(const QubitSetup& setup, const DeviceDelta& delta, RampShape ramp, int nodes) {
  if (ramp == RampShape::Sudden) return effective_hamiltonian(setup, delta).matrix;
  std::vector<double> s, w;
  gauss_legendre(nodes, s, w);
  const Eigen::Index r = setup.encoded.rank();
  Eigen::MatrixXcd avg = Eigen::MatrixXcd::Zero(r, r);
  for (std::size_t k = 0; k < s.size(); ++k) {
    avg += w[k] * effective_hamiltonian(setup, delta.scaled(ramp_profile(ramp, s[k]))).matrix;
  }
  return avg;
}

CPhaseCalibration calibrate_cphase(const QubitSetup& two, const QubitSetup& one, const CPhaseRealizationConfig& cfg) {
  if (two.encoded.rank() != 4 || one.encoded.rank() != 2) throw std::invalid_argument("need two-qubit and single-qubit setups");
  CPhaseCalibration cal;
  cal.config = cfg;
  const DeviceDelta couple = coupling_pulse(cfg.coupling_edges, cfg.couple_dt);
  const DeviceDelta local = tunneling_pulse(0, {1, 2}, cfg.local_dt);
  cal.g_couple = effective_two_qubit(two, couple).matrix;
  cal.h_local = effective_hamiltonian(one, local).matrix;
  if (cfg.ramp != RampShape::Sudden) {
    const Eigen::Matrix4cd avg_c = ramp_average(two, couple, cfg.ramp, cfg.quadrature_nodes);
    const Eigen::Matrix2cd avg_h = ramp_average(one, local, cfg.ramp, cfg.quadrature_nodes);
    cal.ramp_phase = (avg_c + lift_to_qubit_a(avg_h) + lift_to_qubit_b(avg_h)).diagonal().real();
  }
  return cal;
}

CPhaseSchedule build_cphase_schedule(const CPhaseCalibration& cal, double ramp_time) {
  if (ramp_time < 0.0) throw std::invalid_argument("ramp_time must be nonnegative");
  CPhaseSchedule out;
  out.config = cal.config;
  out.config.ramp_time = ramp_time;
  const CPhaseRealizationConfig& cfg = out.config;
  const DeviceDelta couple = coupling_pulse(cfg.coupling_edges, cfg.couple_dt);
  const DeviceDelta local_a = tunneling_pulse(0, {1, 2}, cfg.local_dt);
  const DeviceDelta local_b = tunneling_pulse(5, {8, 9}, cfg.local_dt);
  const double tr = cfg.ramp == RampShape::Sudden ? 0.0 : ramp_time;
  const Eigen::Vector4d offset = 2.0 * tr * cal.ramp_phase;

  out.plan = solve_cphase(lift_to_qubit_a(cal.h_local), cal.g_couple, lift_to_qubit_b(cal.h_local), offset);
  const Eigen::Vector3d& x = out.plan.coefficients;
  if ((x.array() < 0.0).any()) throw SingularPhaseSystem("no nonnegative pulse areas solve the phase equations");
  auto add = [&](double area, const DeviceDelta& d) {
    const double duration = area + 2.0 * tr;
    if (duration <= 0.0) return;
    out.schedule.segments.push_back(PulseSegment{duration, d, cfg.ramp, tr});
  };
  add(x(1), couple);
  if (std::abs(x(0) - x(2)) <= 1e-9 * std::max(1.0, std::abs(x(0)))) {
    add(0.5 * (x(0) + x(2)), local_a + local_b);
  } else {
    add(x(0), local_a);
    add(x(2), local_b);
  }
  return out;
}

CPhaseSchedule build_cphase_schedule(const QubitSetup& two, const QubitSetup& one, const CPhaseRealizationConfig& cfg) {
  return build_cphase_schedule(calibrate_cphase(two, one, cfg), cfg.ramp_time);
}

}  // namespace pentadot
