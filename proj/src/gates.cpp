#include "pentadot/gates.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace pentadot {

namespace {

Eigen::MatrixXcd hermitize(const Eigen::MatrixXcd& m) { return 0.5 * (m + m.adjoint()); }

void fill_summary(EffectiveGate& gate) {
  const Eigen::Index n = gate.matrix.rows();
  gate.diagonal = gate.matrix.diagonal().real();
  gate.max_off_diagonal = 0.0;
  for (Eigen::Index r = 0; r < n; ++r) {
    for (Eigen::Index c = 0; c < n; ++c) {
      if (r != c) gate.max_off_diagonal = std::max(gate.max_off_diagonal, std::abs(gate.matrix(r, c)));
    }
  }
  if (n == 2) gate.pauli = pauli_decompose(gate.matrix);
  gate.method_difference = (gate.matrix - gate.first_order).norm();
}

}  // namespace

PauliDecomposition pauli_decompose(const Eigen::Matrix2cd& m) {
  PauliDecomposition p;
  p.i = 0.5 * (m(0, 0) + m(1, 1)).real();
  p.z = 0.5 * (m(0, 0) - m(1, 1)).real();
  p.x = 0.5 * (m(0, 1) + m(1, 0)).real();
  p.y = 0.5 * (m(1, 0) - m(0, 1)).imag();
  return p;
}

Eigen::Matrix2cd pauli_reconstruct(const PauliDecomposition& p) {
  Eigen::Matrix2cd m;
  m << cplx(p.i + p.z, 0.0), cplx(p.x, -p.y), cplx(p.x, p.y), cplx(p.i - p.z, 0.0);
  return m;
}

EffectiveGate effective_hamiltonian(const QubitSetup& setup, const DeviceDelta& d) {
  const Eigen::Index r = setup.encoded.rank();
  const Eigen::MatrixXcd& basis = setup.encoded.vectors;
  EffectiveGate gate;
  gate.perturbation = d;
  gate.seed = setup.solver.seed;
  if (d.empty()) {
    gate.matrix = Eigen::MatrixXcd::Zero(r, r);
    gate.first_order = gate.matrix;
    gate.gap = setup.ground.gap_to_next;
    fill_summary(gate);
    return gate;
  }

  const SparseOperator dh = assemble_hubbard_delta(setup.device, d, setup.basis);
  gate.first_order = hermitize(basis.adjoint() * dh.apply(basis));

  const SparseOperator perturbed = setup.hamiltonian + dh;
  const Spectrum spec = lowest_k(perturbed, static_cast<std::size_t>(r + 1), setup.solver);
  const Eigen::MatrixXcd q = spec.eigenvectors.leftCols(r);
  gate.gap = spec.eigenvalues[static_cast<std::size_t>(r)] - spec.eigenvalues[static_cast<std::size_t>(r - 1)];

  const Eigen::MatrixXcd w = basis.adjoint() * q;
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(w, Eigen::ComputeFullU | Eigen::ComputeFullV);
  gate.overlap_min = svd.singularValues().minCoeff();
  if (gate.overlap_min < kMinSubspaceOverlap) {
    throw GapClosedError("perturbation mixes the encoded space with excited states (overlap " +
                         std::to_string(gate.overlap_min) + ")");
  }
  const Eigen::MatrixXcd polar = svd.matrixU() * svd.matrixV().adjoint();
  Eigen::MatrixXcd projected = q.adjoint() * perturbed.apply(q);
  projected -= setup.idle_energy * Eigen::MatrixXcd::Identity(r, r);
  gate.matrix = hermitize(polar * hermitize(projected) * polar.adjoint());

  for (Eigen::Index k = 0; k < r; ++k) gate.s2_max = std::max(gate.s2_max, setup.s2.expectation(q.col(k)));
  fill_summary(gate);
  return gate;
}

EffectiveGate effective_two_qubit(const QubitSetup& setup, const DeviceDelta& d) {
  if (setup.encoded.rank() != 4) throw std::invalid_argument("two-qubit extraction needs a rank-4 encoded basis");
  return effective_hamiltonian(setup, d);
}

Eigen::MatrixXcd traceless(const Eigen::MatrixXcd& m) {
  const cplx mean = m.trace() / static_cast<double>(m.rows());
  return m - mean * Eigen::MatrixXcd::Identity(m.rows(), m.cols());
}

double relative_shape_deviation(const Eigen::MatrixXcd& m, const Eigen::MatrixXcd& reference) {
  const Eigen::MatrixXcd t = traceless(m);
  const Eigen::MatrixXcd ref = traceless(reference);
  const double tn = t.norm();
  if (tn == 0.0) return std::numeric_limits<double>::infinity();
  const double c = ref.cwiseProduct(t.conjugate()).sum().real() / ref.squaredNorm();
  return (t - c * ref).norm() / tn;
}

double pseudofield_angle_deg(const PauliDecomposition& a, const PauliDecomposition& b) {
  const Eigen::Vector3d va(a.x, a.y, a.z);
  const Eigen::Vector3d vb(b.x, b.y, b.z);
  const double c = std::clamp(va.dot(vb) / (va.norm() * vb.norm()), -1.0, 1.0);
  return std::acos(c) * 180.0 / std::numbers::pi;
}

Eigen::Matrix4cd lift_to_qubit_a(const Eigen::Matrix2cd& m) {
  Eigen::Matrix4cd out = Eigen::Matrix4cd::Zero();
  for (int a = 0; a < 2; ++a) {
    for (int b = 0; b < 2; ++b) {
      out(2 * a, 2 * b) = m(a, b);
      out(2 * a + 1, 2 * b + 1) = m(a, b);
    }
  }
  return out;
}

Eigen::Matrix4cd lift_to_qubit_b(const Eigen::Matrix2cd& m) {
  Eigen::Matrix4cd out = Eigen::Matrix4cd::Zero();
  out.topLeftCorner<2, 2>() = m;
  out.bottomRightCorner<2, 2>() = m;
  return out;
}

Eigen::Matrix4cd cphase_target() {
  Eigen::Matrix4cd cp = Eigen::Matrix4cd::Identity();
  cp(3, 3) = -1.0;
  return cp;
}

double gate_fidelity(const Eigen::Matrix4cd& u, const Eigen::Matrix4cd& target) {
  return std::norm((target.adjoint() * u).trace()) / 16.0;
}

Eigen::MatrixXcd unitary_from_generator(const Eigen::MatrixXcd& h) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(hermitize(h));
  const Eigen::VectorXcd phases = (eig.eigenvalues().cast<cplx>() * cplx(0.0, -1.0)).array().exp();
  return eig.eigenvectors() * phases.asDiagonal() * eig.eigenvectors().adjoint();
}

CPhasePlan solve_cphase(const Eigen::Matrix4cd& g_a, const Eigen::Matrix4cd& g_couple, const Eigen::Matrix4cd& g_b,
                        const Eigen::Vector4d& offset) {
  CPhasePlan plan;
  plan.generators = {g_a, g_couple, g_b};
  plan.offset = offset;
  plan.commutator_norms = {(g_a * g_couple - g_couple * g_a).norm(), (g_a * g_b - g_b * g_a).norm(),
                           (g_couple * g_b - g_b * g_couple).norm()};

  // Row k: phase of |k> relative to |00>, for k = 01, 10, 11.
  Eigen::Matrix3d m;
  for (int c = 0; c < 3; ++c) {
    const Eigen::Vector4d diag = plan.generators[static_cast<std::size_t>(c)].diagonal().real();
    for (int k = 1; k < 4; ++k) m(k - 1, c) = diag(k) - diag(0);
  }
  const Eigen::Vector4d cd = g_couple.diagonal().real();
  plan.coupling_contrast = cd(0) + cd(3) - cd(1) - cd(2);
  const double scale = std::max(m.cwiseAbs().maxCoeff(), std::numeric_limits<double>::min());
  if (std::abs(m.determinant()) < 1e-12 * scale * scale * scale) {
    const double dz = m(1, 0);
    const double dw = m(0, 2);
    std::string why;
    if (std::abs(plan.coupling_contrast) < 1e-9 * scale) why = "coupling contrast A + C - 2B vanishes";
    else if (std::abs(dz) < 1e-9 * scale) why = "local generator on qubit A has no splitting";
    else if (std::abs(dw) < 1e-9 * scale) why = "local generator on qubit B has no splitting";
    else why = "phase system is degenerate";
    throw SingularPhaseSystem("cannot solve controlled-phase equations: " + why);
  }

  // Wanted: offset differences + M x = -(0, 0, pi) mod 2 pi.
  Eigen::Vector3d rhs;
  for (int k = 1; k < 4; ++k) rhs(k - 1) = -(offset(k) - offset(0));
  rhs(2) -= std::numbers::pi;
  const Eigen::Matrix3d inv = m.inverse();
  constexpr int kBox = 6;
  const double two_pi = 2.0 * std::numbers::pi;
  bool have_nonneg = false;
  double best_score = std::numeric_limits<double>::infinity();
  for (int a = -kBox; a <= kBox; ++a) {
    for (int b = -kBox; b <= kBox; ++b) {
      for (int c = -kBox; c <= kBox; ++c) {
        const Eigen::Vector3i n(a, b, c);
        const Eigen::Vector3d x = inv * (rhs + two_pi * n.cast<double>());
        const bool nonneg = (x.array() >= -1e-12).all();
        if (have_nonneg && !nonneg) continue;
        const double score = nonneg ? x.sum() : x.cwiseAbs().sum();
        if ((nonneg && !have_nonneg) || score < best_score - 1e-12) {
          have_nonneg = have_nonneg || nonneg;
          best_score = score;
          plan.coefficients = x;
          plan.branch = n;
        }
      }
    }
  }
  plan.branch_rule = have_nonneg ? "nonnegative areas, smallest total" : "smallest total magnitude";

  Eigen::Matrix4cd total = offset.cast<cplx>().asDiagonal();
  for (int k = 0; k < 3; ++k) total += plan.coefficients(k) * plan.generators[static_cast<std::size_t>(k)];
  plan.predicted_unitary = unitary_from_generator(total);
  plan.fidelity_deficit = 1.0 - gate_fidelity(plan.predicted_unitary, cphase_target());
  return plan;
}

}  // namespace pentadot
