#pragma once

#include <complex>
#include <cstddef>
#include <map>
#include <ostream>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include "pentadot/fock.hpp"
#include "pentadot/model.hpp"

namespace pentadot {

using cplx = std::complex<double>;
using CsrMatrix = Eigen::SparseMatrix<cplx, Eigen::RowMajor>;

/// Sparse matrix tagged with the basis it acts on. Storage is row-compressed
/// with sorted columns, so assembly is deterministic.
class SparseOperator {
 public:
  SparseOperator() = default;
  SparseOperator(CsrMatrix m, std::string basis_tag);

  std::size_t dim() const { return static_cast<std::size_t>(m_.rows()); }
  const CsrMatrix& matrix() const { return m_; }
  const std::string& basis_tag() const { return tag_; }
  std::size_t nonzeros() const { return static_cast<std::size_t>(m_.nonZeros()); }

  Eigen::VectorXcd apply(const Eigen::VectorXcd& x) const { return m_ * x; }
  Eigen::MatrixXcd apply(const Eigen::MatrixXcd& x) const { return m_ * x; }
  Eigen::MatrixXcd to_dense() const { return Eigen::MatrixXcd(m_); }

  /// max |A(r,c) - conj(A(c,r))| over stored entries.
  double hermiticity_residual() const;

  /// <x|A|x> for normalized x.
  double expectation(const Eigen::VectorXcd& x) const;

  SparseOperator operator+(const SparseOperator& other) const;
  SparseOperator operator-(const SparseOperator& other) const;
  SparseOperator scaled(double factor) const;

 private:
  CsrMatrix m_;
  std::string tag_;
};

/// Frobenius norm of AB - BA.
double commutator_norm(const SparseOperator& a, const SparseOperator& b);

/// Hubbard Hamiltonian on one sector:
///   sum_edges t (c+_i c_j + c+_j c_i)  per spin
///   + sum_i U_i n_i,up n_i,dn - mu_i n_i + bz_i (n_i,up - n_i,dn) / 2
SparseOperator assemble_hubbard(const DeviceGraph& g, const SectorBasis& b);

/// H(g + d) - H(g) on the same sector. Exact because H is linear in t, mu, bz.
SparseOperator assemble_hubbard_delta(const DeviceGraph& g, const DeviceDelta& d, const SectorBasis& b);

/// Spin-1/2 Heisenberg model sum J_ij S_i . S_j on the full 2^n basis
/// (bit k set means spin k up). Keys are unordered dot pairs.
using CouplingMap = std::map<std::pair<int, int>, double>;
SparseOperator assemble_heisenberg(const CouplingMap& J, int n_spins);

/// All-to-all equal couplings J on n spins.
CouplingMap uniform_couplings(int n_spins, double J);

/// Total spin squared (sum_i S_i)^2 expanded into two-site terms.
SparseOperator assemble_s2(const SectorBasis& b);

/// Total spin squared on the 2^n spin-1/2 basis.
SparseOperator assemble_spin_s2(int n_spins);

/// Fermionic site relabeling c+_{i,s} -> c+_{perm[i],s}. perm must be a
/// bijection on 0..n_dots-1.
SparseOperator permutation_operator(std::span<const int> perm, const SectorBasis& b);

/// sign(perm) times the fermionic relabeling. On states with every involved
/// dot singly occupied this is the spin-exchange operator, so a singlet bond
/// is odd under the exchange of its two sites.
SparseOperator exchange_parity(std::span<const int> perm, const SectorBasis& b);

/// Permutation that swaps dots a and b on n dots.
std::vector<int> transposition(int n_dots, int a, int b);
int permutation_sign(std::span<const int> perm);

/// Occupation operator n_dot (diagonal).
SparseOperator number_operator(const SectorBasis& b, int dot);

/// Coordinate-list dump, one "row col re im" line per stored entry.
void write_coo(std::ostream& os, const SparseOperator& op);

}  // namespace pentadot
