#include "pentadot/fock.hpp"

#include <bit>
#include <stdexcept>

namespace pentadot {

namespace {

std::vector<std::uint32_t> masks_with_popcount(int n_dots, int count) {
  std::vector<std::uint32_t> out;
  const std::uint32_t limit = 1u << n_dots;
  for (std::uint32_t m = 0; m < limit; ++m) {
    if (std::popcount(m) == count) out.push_back(m);
  }
  return out;
}

std::uint32_t below(int dot) { return (1u << dot) - 1u; }

// Number of occupied modes that precede mode (dot, spin) in the global order.
int modes_before(const FockState& s, int dot, Spin spin) {
  if (spin == Spin::Up) return std::popcount(s.up & below(dot));
  return std::popcount(s.up) + std::popcount(s.dn & below(dot));
}

int parity_sign(int count) { return (count & 1) ? -1 : 1; }

std::uint32_t& mask_of(FockState& s, Spin spin) { return spin == Spin::Up ? s.up : s.dn; }

}  // namespace

std::uint64_t binomial(int n, int k) {
  if (k < 0 || k > n) return 0;
  std::uint64_t r = 1;
  for (int i = 1; i <= k; ++i) r = r * static_cast<std::uint64_t>(n - k + i) / static_cast<std::uint64_t>(i);
  return r;
}

SectorBasis::SectorBasis(int n_dots, int n_up, int n_dn) : n_dots_(n_dots), n_up_(n_up), n_dn_(n_dn) {
  if (n_dots < 1 || n_dots > kMaxDots) throw std::invalid_argument("n_dots out of range");
  if (n_up < 0 || n_up > n_dots || n_dn < 0 || n_dn > n_dots) {
    throw std::invalid_argument("spin counts must lie in [0, n_dots]");
  }
  up_masks_ = masks_with_popcount(n_dots, n_up);
  dn_masks_ = masks_with_popcount(n_dots, n_dn);
  up_rank_.assign(std::size_t{1} << n_dots, -1);
  dn_rank_.assign(std::size_t{1} << n_dots, -1);
  for (std::size_t k = 0; k < up_masks_.size(); ++k) up_rank_[up_masks_[k]] = static_cast<std::int32_t>(k);
  for (std::size_t k = 0; k < dn_masks_.size(); ++k) dn_rank_[dn_masks_[k]] = static_cast<std::int32_t>(k);
  states_.reserve(up_masks_.size() * dn_masks_.size());
  for (auto u : up_masks_) {
    for (auto d : dn_masks_) states_.push_back({u, d});
  }
}

std::optional<std::size_t> SectorBasis::index(const FockState& s) const {
  const std::uint32_t limit = 1u << n_dots_;
  if (s.up >= limit || s.dn >= limit) return std::nullopt;
  const auto ru = up_rank_[s.up];
  const auto rd = dn_rank_[s.dn];
  if (ru < 0 || rd < 0) return std::nullopt;
  return static_cast<std::size_t>(ru) * dn_masks_.size() + static_cast<std::size_t>(rd);
}

std::string SectorBasis::tag() const {
  return "fock:" + std::to_string(n_dots_) + ":" + std::to_string(n_up_) + ":" + std::to_string(n_dn_);
}

SectorBasis build_sector(int n_dots, int n_up, int n_dn) { return SectorBasis(n_dots, n_up, n_dn); }

std::optional<SignedState> annihilate(const FockState& s, int dot, Spin spin) {
  FockState out = s;
  auto& m = mask_of(out, spin);
  if (!((m >> dot) & 1u)) return std::nullopt;
  const int sign = parity_sign(modes_before(s, dot, spin));
  m &= ~(1u << dot);
  return SignedState{out, sign};
}

std::optional<SignedState> create(const FockState& s, int dot, Spin spin) {
  FockState out = s;
  auto& m = mask_of(out, spin);
  if ((m >> dot) & 1u) return std::nullopt;
  const int sign = parity_sign(modes_before(s, dot, spin));
  m |= (1u << dot);
  return SignedState{out, sign};
}

std::optional<SignedState> hop(const FockState& s, int i, int j, Spin spin) {
  if (i == j) throw std::invalid_argument("hop requires distinct dots");
  auto removed = annihilate(s, j, spin);
  if (!removed) return std::nullopt;
  auto added = create(removed->state, i, spin);
  if (!added) return std::nullopt;
  return SignedState{added->state, removed->sign * added->sign};
}

std::optional<SignedState> spin_raise(const FockState& s, int dot) {
  auto removed = annihilate(s, dot, Spin::Down);
  if (!removed) return std::nullopt;
  auto added = create(removed->state, dot, Spin::Up);
  if (!added) return std::nullopt;
  return SignedState{added->state, removed->sign * added->sign};
}

std::optional<SignedState> spin_lower(const FockState& s, int dot) {
  auto removed = annihilate(s, dot, Spin::Up);
  if (!removed) return std::nullopt;
  auto added = create(removed->state, dot, Spin::Down);
  if (!added) return std::nullopt;
  return SignedState{added->state, removed->sign * added->sign};
}

namespace {

// Maps one spin channel; returns the mapped mask and the reordering parity.
std::pair<std::uint32_t, int> relabel_mask(std::uint32_t mask, std::span<const int> perm) {
  int targets[32];
  int n = 0;
  std::uint32_t out = 0;
  for (int d = 0; d < static_cast<int>(perm.size()); ++d) {
    if ((mask >> d) & 1u) {
      targets[n++] = perm[d];
      out |= 1u << perm[d];
    }
  }
  int inversions = 0;
  for (int a = 0; a < n; ++a) {
    for (int b = a + 1; b < n; ++b) inversions += targets[a] > targets[b];
  }
  return {out, parity_sign(inversions)};
}

}  // namespace

SignedState relabel(const FockState& s, std::span<const int> perm) {
  const auto [up, su] = relabel_mask(s.up, perm);
  const auto [dn, sd] = relabel_mask(s.dn, perm);
  return SignedState{FockState{up, dn}, su * sd};
}

}  // namespace pentadot
