#pragma once

#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "pentadot/fock.hpp"
#include "pentadot/model.hpp"
#include "pentadot/operators.hpp"
#include "pentadot/spectra.hpp"

namespace pentadot {

using Pairing = std::vector<std::pair<int, int>>;

/// Product of two-site singlets. A singlet (i, j) with i < j is
/// (|up_i dn_j> - |dn_i up_j>)/sqrt(2) in spin language; spin configurations
/// are embedded as creation operators ordered by ascending dot id. Dots in
/// `doubly_occupied` carry an up-down pair, all others are empty.
struct ValenceBondState {
  Pairing pairing;
  std::vector<int> doubly_occupied;
  Eigen::VectorXcd vector;
};

ValenceBondState vb_state(const Pairing& pairing, const SectorBasis& b, const std::vector<int>& doubly_occupied = {});

/// Symmetry label used for gauge fixing: an exchange-parity operator and its
/// eigenvalue on each encoded vector.
struct GaugeRecord {
  std::vector<std::string> parity_names;
  /// parity_values[k][p]: eigenvalue of parity p on encoded vector k.
  std::vector<std::vector<int>> parity_values;
  std::string phase_rule;
  /// |<ref_k|v_k>| with ref_k normalized.
  std::vector<double> reference_overlaps;
};

struct EncodedBasis {
  int n_dots = 0;
  int n_up = 0;
  int n_dn = 0;
  std::string basis_tag;
  /// Orthonormal columns: |0>,|1> for one qubit, |00>,|01>,|10>,|11> for two.
  Eigen::MatrixXcd vectors;
  GaugeRecord gauge;

  Eigen::Index rank() const { return vectors.cols(); }
};

/// Logical basis of a rank-2 ground space. |0> has exchange parity -1 under
/// both `p_a` and `p_b`, |1> has +1. Phases: <ref0|0> and <ref1|1> real
/// positive, where ref1 is first projected into the ground space.
EncodedBasis gauge_fixed_qubit_basis(const Eigen::MatrixXcd& ground, const SectorBasis& b, const SparseOperator& p_a,
                                     const SparseOperator& p_b, const Eigen::VectorXcd& ref0,
                                     const Eigen::VectorXcd& ref1, std::vector<std::string> parity_names = {"P12", "P34"});

/// Simultaneous parity eigenbasis of a rank-4 ground space, ordered
/// |00>,|01>,|10>,|11> (qubit A first). Parities are {A pair 1, A pair 2,
/// B pair 1, B pair 2}; |0> of a qubit is odd under its pairs. refs[k] fixes
/// the phase of vector k.
EncodedBasis two_qubit_basis(const Eigen::MatrixXcd& ground, const SectorBasis& b,
                             const std::vector<SparseOperator>& parities, const std::vector<Eigen::VectorXcd>& refs,
                             std::vector<std::string> parity_names);

/// Overlaps among the three valence-bond states a=(12)(34), b=(13)(24),
/// c=(14)(23) of the star's outer dots.
struct ValenceBondGeometry {
  Eigen::Matrix3cd gram;
  double smallest_gram_eigenvalue = 0.0;
  /// ||b + c||; the logical |1> of the valence-bond picture is (b+c)/norm.
  double one_state_norm = 0.0;
};
ValenceBondGeometry valence_bond_geometry(const SectorBasis& b, const std::vector<int>& doubly_occupied = {});

/// Everything needed to work with one encoded five-dot qubit.
struct QubitSetup {
  DeviceGraph device;
  SectorBasis basis;
  SparseOperator hamiltonian;
  SparseOperator s2;
  DegeneracyReport ground;
  EncodedBasis encoded;
  double idle_energy = 0.0;
  SolverOptions solver;
};

/// Five-dot qubit with 4 or 6 electrons in the (N/2, N/2) sector.
QubitSetup encode_single_qubit(const DeviceGraph& g, int n_electrons = 4, const SolverOptions& opts = {});

/// Two five-dot qubits (dots 0-4 and 5-9) with 4 electrons each, sector (4,4).
/// Qubit B's pair labels are (6,7),(8,9), mirroring A's (1,2),(3,4).
QubitSetup encode_two_qubits(const DeviceGraph& g10, const SolverOptions& opts = {});

/// Pairings for qubit A (dots 1-4) and qubit B (dots 6-9).
inline const Pairing kPairingA_a{{1, 2}, {3, 4}};
inline const Pairing kPairingA_b{{1, 3}, {2, 4}};
inline const Pairing kPairingA_c{{1, 4}, {2, 3}};
inline const Pairing kPairingB_a{{6, 7}, {8, 9}};
inline const Pairing kPairingB_b{{6, 8}, {7, 9}};
inline const Pairing kPairingB_c{{6, 9}, {7, 8}};

}  // namespace pentadot
