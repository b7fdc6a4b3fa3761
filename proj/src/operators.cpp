#include "pentadot/operators.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <iomanip>
#include <numeric>
#include <stdexcept>

namespace pentadot {

namespace {

using Triplet = Eigen::Triplet<cplx>;

SparseOperator from_triplets(std::size_t dim, const std::vector<Triplet>& entries, std::string tag) {
  CsrMatrix m(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
  m.setFromTriplets(entries.begin(), entries.end());
  m.makeCompressed();
  return SparseOperator(std::move(m), std::move(tag));
}

void check_perm(std::span<const int> perm, int n) {
  if (static_cast<int>(perm.size()) != n) throw std::invalid_argument("permutation size mismatch");
  std::vector<int> seen(static_cast<std::size_t>(n), 0);
  for (int p : perm) {
    if (p < 0 || p >= n || seen[static_cast<std::size_t>(p)]++) {
      throw std::invalid_argument("permutation is not a bijection");
    }
  }
}

}  // namespace

SparseOperator::SparseOperator(CsrMatrix m, std::string basis_tag) : m_(std::move(m)), tag_(std::move(basis_tag)) {
  if (m_.rows() != m_.cols()) throw std::invalid_argument("operator must be square");
  m_.makeCompressed();
}

double SparseOperator::hermiticity_residual() const {
  const CsrMatrix adj = m_.adjoint();
  const CsrMatrix diff = m_ - adj;
  double worst = 0.0;
  for (Eigen::Index r = 0; r < diff.outerSize(); ++r) {
    for (CsrMatrix::InnerIterator it(diff, r); it; ++it) worst = std::max(worst, std::abs(it.value()));
  }
  return worst;
}

double SparseOperator::expectation(const Eigen::VectorXcd& x) const { return x.dot(m_ * x).real(); }

SparseOperator SparseOperator::operator+(const SparseOperator& other) const {
  if (tag_ != other.tag_) throw std::invalid_argument("basis mismatch: " + tag_ + " vs " + other.tag_);
  return SparseOperator(CsrMatrix(m_ + other.m_), tag_);
}

SparseOperator SparseOperator::operator-(const SparseOperator& other) const {
  if (tag_ != other.tag_) throw std::invalid_argument("basis mismatch: " + tag_ + " vs " + other.tag_);
  return SparseOperator(CsrMatrix(m_ - other.m_), tag_);
}

SparseOperator SparseOperator::scaled(double factor) const { return SparseOperator(CsrMatrix(m_ * cplx(factor)), tag_); }

double commutator_norm(const SparseOperator& a, const SparseOperator& b) {
  if (a.basis_tag() != b.basis_tag()) throw std::invalid_argument("commutator of operators on different bases");
  const CsrMatrix ab = a.matrix() * b.matrix();
  const CsrMatrix ba = b.matrix() * a.matrix();
  return CsrMatrix(ab - ba).norm();
}

SparseOperator assemble_hubbard(const DeviceGraph& g, const SectorBasis& b) {
  if (static_cast<int>(g.n_dots()) != b.n_dots()) {
    throw std::invalid_argument("device has " + std::to_string(g.n_dots()) + " dots but basis has " +
                                std::to_string(b.n_dots()));
  }
  std::vector<Triplet> entries;
  entries.reserve(b.size() * (1 + 4 * g.edges().size()));
  for (std::size_t col = 0; col < b.size(); ++col) {
    const FockState& s = b.state(col);
    double diag = 0.0;
    for (const Dot& d : g.dots()) {
      const int nu = static_cast<int>((s.up >> d.id) & 1u);
      const int nd = static_cast<int>((s.dn >> d.id) & 1u);
      diag += d.U * nu * nd - d.mu * (nu + nd) + 0.5 * d.bz * (nu - nd);
    }
    if (diag != 0.0) entries.emplace_back(col, col, diag);
    for (const Edge& e : g.edges()) {
      if (e.t == 0.0) continue;
      for (Spin spin : {Spin::Up, Spin::Down}) {
        for (auto [to, from] : {std::pair{e.i, e.j}, std::pair{e.j, e.i}}) {
          auto moved = hop(s, to, from, spin);
          if (!moved) continue;
          const auto row = b.index(moved->state);
          entries.emplace_back(*row, col, e.t * moved->sign);
        }
      }
    }
  }
  return from_triplets(b.size(), entries, b.tag());
}

SparseOperator assemble_hubbard_delta(const DeviceGraph& g, const DeviceDelta& d, const SectorBasis& b) {
  // Only the shifted parameters contribute, so build a device holding just them.
  std::vector<Dot> dots = g.dots();
  for (auto& dot : dots) dot = Dot{dot.id, 0.0, 0.0, 0.0};
  std::vector<Edge> edges = g.edges();
  for (auto& e : edges) e.t = 0.0;
  DeviceGraph zero(std::move(dots), std::move(edges));
  return assemble_hubbard(apply_delta(zero, d), b);
}

CouplingMap uniform_couplings(int n_spins, double J) {
  CouplingMap out;
  for (int i = 0; i < n_spins; ++i) {
    for (int j = i + 1; j < n_spins; ++j) out[{i, j}] = J;
  }
  return out;
}

SparseOperator assemble_heisenberg(const CouplingMap& J, int n_spins) {
  if (n_spins < 2 || n_spins > 24) throw std::invalid_argument("assemble_heisenberg: n_spins out of range");
  const std::size_t dim = std::size_t{1} << n_spins;
  std::vector<Triplet> entries;
  for (std::size_t s = 0; s < dim; ++s) {
    double diag = 0.0;
    for (const auto& [pair, j] : J) {
      auto [a, c] = pair;
      if (a == c || a < 0 || c < 0 || a >= n_spins || c >= n_spins) {
        throw std::invalid_argument("assemble_heisenberg: invalid spin pair");
      }
      const bool ua = (s >> a) & 1u;
      const bool uc = (s >> c) & 1u;
      diag += j * (ua == uc ? 0.25 : -0.25);
      if (ua != uc) {
        const std::size_t flipped = s ^ ((std::size_t{1} << a) | (std::size_t{1} << c));
        entries.emplace_back(flipped, s, 0.5 * j);
      }
    }
    if (diag != 0.0) entries.emplace_back(s, s, diag);
  }
  return from_triplets(dim, entries, "spin:" + std::to_string(n_spins));
}

SparseOperator assemble_spin_s2(int n_spins) {
  // S^2 = 2 sum_{i<j} S_i.S_j + (3/4) n
  const SparseOperator pairs = assemble_heisenberg(uniform_couplings(n_spins, 2.0), n_spins);
  CsrMatrix diag(pairs.matrix().rows(), pairs.matrix().cols());
  diag.setIdentity();
  return pairs + SparseOperator(CsrMatrix(diag * cplx(0.75 * n_spins)), pairs.basis_tag());
}

SparseOperator assemble_s2(const SectorBasis& b) {
  const int n = b.n_dots();
  std::vector<Triplet> entries;
  for (std::size_t col = 0; col < b.size(); ++col) {
    const FockState& s = b.state(col);
    const double sz = 0.5 * (std::popcount(s.up) - std::popcount(s.dn));
    // S^2 = sum_{ij} [ (S+_i S-_j + S-_i S+_j)/2 + Sz_i Sz_j ]
    entries.emplace_back(col, col, sz * sz);
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        if (auto lowered = spin_lower(s, j)) {
          if (auto raised = spin_raise(lowered->state, i)) {
            entries.emplace_back(*b.index(raised->state), col, 0.5 * lowered->sign * raised->sign);
          }
        }
        if (auto raised = spin_raise(s, j)) {
          if (auto lowered = spin_lower(raised->state, i)) {
            entries.emplace_back(*b.index(lowered->state), col, 0.5 * lowered->sign * raised->sign);
          }
        }
      }
    }
  }
  return from_triplets(b.size(), entries, b.tag());
}

SparseOperator permutation_operator(std::span<const int> perm, const SectorBasis& b) {
  check_perm(perm, b.n_dots());
  std::vector<Triplet> entries;
  entries.reserve(b.size());
  for (std::size_t col = 0; col < b.size(); ++col) {
    const SignedState mapped = relabel(b.state(col), perm);
    entries.emplace_back(*b.index(mapped.state), col, static_cast<double>(mapped.sign));
  }
  return from_triplets(b.size(), entries, b.tag());
}

int permutation_sign(std::span<const int> perm) {
  int inversions = 0;
  for (std::size_t a = 0; a < perm.size(); ++a) {
    for (std::size_t c = a + 1; c < perm.size(); ++c) inversions += perm[a] > perm[c];
  }
  return (inversions & 1) ? -1 : 1;
}

SparseOperator exchange_parity(std::span<const int> perm, const SectorBasis& b) {
  return permutation_operator(perm, b).scaled(permutation_sign(perm));
}

std::vector<int> transposition(int n_dots, int a, int b) {
  std::vector<int> perm(static_cast<std::size_t>(n_dots));
  std::iota(perm.begin(), perm.end(), 0);
  std::swap(perm.at(static_cast<std::size_t>(a)), perm.at(static_cast<std::size_t>(b)));
  return perm;
}

SparseOperator number_operator(const SectorBasis& b, int dot) {
  std::vector<Triplet> entries;
  for (std::size_t k = 0; k < b.size(); ++k) {
    const int n = occupancy(b.state(k), dot);
    if (n) entries.emplace_back(k, k, static_cast<double>(n));
  }
  return from_triplets(b.size(), entries, b.tag());
}

void write_coo(std::ostream& os, const SparseOperator& op) {
  const auto& m = op.matrix();
  os << std::setprecision(17);
  for (Eigen::Index r = 0; r < m.outerSize(); ++r) {
    for (CsrMatrix::InnerIterator it(m, r); it; ++it) {
      os << it.row() << ' ' << it.col() << ' ' << it.value().real() << ' ' << it.value().imag() << '\n';
    }
  }
}

}  // namespace pentadot
