#pragma once

#include <array>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "pentadot/encoding.hpp"
#include "pentadot/model.hpp"

namespace pentadot {

/// Identity plus Pauli coefficients of a 2x2 Hermitian matrix:
/// m = i*1 + x*sx + y*sy + z*sz.
struct PauliDecomposition {
  double i = 0.0;
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;
};

PauliDecomposition pauli_decompose(const Eigen::Matrix2cd& m);
Eigen::Matrix2cd pauli_reconstruct(const PauliDecomposition& p);

/// Effective Hamiltonian of a perturbation inside the encoded space, measured
/// relative to the idle ground energy.
struct EffectiveGate {
  /// Exact-splitting result; the primary answer.
  Eigen::MatrixXcd matrix;
  /// B^dag dH B with B the idle encoded basis.
  Eigen::MatrixXcd first_order;
  /// Filled for 2x2 gates.
  PauliDecomposition pauli;
  /// Real diagonal of `matrix`; for two-qubit gates these are A, B, B', C.
  Eigen::VectorXd diagonal;
  double max_off_diagonal = 0.0;
  DeviceDelta perturbation;
  std::string method = "exact-splitting";
  /// ||matrix - first_order||_F.
  double method_difference = 0.0;
  /// Largest <S^2> over the perturbed low-energy vectors.
  double s2_max = 0.0;
  /// Smallest singular value of the overlap between idle and perturbed spaces.
  double overlap_min = 1.0;
  /// Gap from the perturbed low-energy space to the next level.
  double gap = 0.0;
  std::uint64_t seed = 0;
};

class GapClosedError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Minimum overlap singular value accepted before a perturbation is treated as
/// having closed the gap.
inline constexpr double kMinSubspaceOverlap = 0.5;

/// Diagonalizes H(g + d) in the encoded sector, takes its lowest rank(basis)
/// levels and maps them onto the encoded basis with the polar factor of
/// B^dag Q. The result does not depend on how Q is chosen inside its span.
EffectiveGate effective_hamiltonian(const QubitSetup& setup, const DeviceDelta& d);

/// Same extraction for a two-qubit setup; checks the basis has rank 4.
EffectiveGate effective_two_qubit(const QubitSetup& setup, const DeviceDelta& d);

/// Traceless part of a square matrix.
Eigen::MatrixXcd traceless(const Eigen::MatrixXcd& m);

/// min_c ||T - c R|| / ||T|| for traceless parts T of m and R of reference.
double relative_shape_deviation(const Eigen::MatrixXcd& m, const Eigen::MatrixXcd& reference);

/// Angle in degrees between the (x, y, z) pseudofields of two 2x2 gates.
double pseudofield_angle_deg(const PauliDecomposition& a, const PauliDecomposition& b);

/// Lifts a single-qubit matrix onto qubit A (first factor) or B of a pair.
Eigen::Matrix4cd lift_to_qubit_a(const Eigen::Matrix2cd& m);
Eigen::Matrix4cd lift_to_qubit_b(const Eigen::Matrix2cd& m);

Eigen::Matrix4cd cphase_target();

/// |Tr(target^dag u)|^2 / 16.
double gate_fidelity(const Eigen::Matrix4cd& u, const Eigen::Matrix4cd& target);

/// exp(-i h) for Hermitian h.
Eigen::MatrixXcd unitary_from_generator(const Eigen::MatrixXcd& h);

class SingularPhaseSystem : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct CPhasePlan {
  /// Generators in order: local on A, coupling, local on B.
  std::array<Eigen::Matrix4cd, 3> generators;
  /// Phase areas x_k: the target is exp(-i (offset + sum_k x_k G_k)).
  Eigen::Vector3d coefficients = Eigen::Vector3d::Zero();
  /// Extra diagonal phases already accumulated elsewhere (e.g. during ramps).
  Eigen::Vector4d offset = Eigen::Vector4d::Zero();
  Eigen::Vector3i branch = Eigen::Vector3i::Zero();
  std::string branch_rule;
  Eigen::Matrix4cd predicted_unitary;
  double fidelity_deficit = 1.0;
  /// ||[G_a, G_b]||_F for pairs (0,1), (0,2), (1,2).
  std::array<double, 3> commutator_norms{};
  /// A + C - 2B of the coupling generator, the combination the system needs nonzero.
  double coupling_contrast = 0.0;
};

/// Solves for phase areas turning the three commuting diagonal generators into
/// diag(1,1,1,-1) up to a global phase. Only diagonal entries enter the phase
/// equations; off-diagonal residue shows up in the fidelity. Among the 2*pi
/// branches in a +-6 box, the nonnegative solution with the smallest total area
/// wins; without one, the smallest sum of magnitudes.
CPhasePlan solve_cphase(const Eigen::Matrix4cd& g_a, const Eigen::Matrix4cd& g_couple, const Eigen::Matrix4cd& g_b,
                        const Eigen::Vector4d& offset = Eigen::Vector4d::Zero());

}  // namespace pentadot
