#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace pentadot {

// Fermionic mode ordering used everywhere: all spin-up modes by ascending dot
// id, followed by all spin-down modes by ascending dot id. A basis state
// |up_mask, dn_mask> is the product of creation operators in that order
// applied to the vacuum, lowest mode leftmost.

enum class Spin { Up, Down };

struct FockState {
  std::uint32_t up = 0;
  std::uint32_t dn = 0;

  friend auto operator<=>(const FockState&, const FockState&) = default;
};

struct SignedState {
  FockState state;
  int sign = 1;
};

/// Fixed (N_up, N_dn) sector, states ordered by (up_mask, dn_mask) ascending.
class SectorBasis {
 public:
  static constexpr int kMaxDots = 16;

  SectorBasis(int n_dots, int n_up, int n_dn);

  int n_dots() const { return n_dots_; }
  int n_up() const { return n_up_; }
  int n_dn() const { return n_dn_; }
  int n_electrons() const { return n_up_ + n_dn_; }
  std::size_t size() const { return states_.size(); }
  const FockState& state(std::size_t k) const { return states_[k]; }
  const std::vector<FockState>& states() const { return states_; }

  /// Ordinal of `s`, or nullopt when `s` is not in this sector.
  std::optional<std::size_t> index(const FockState& s) const;

  /// Identifier such as "fock:5:2:2"; operators carry it as their basis tag.
  std::string tag() const;

 private:
  int n_dots_;
  int n_up_;
  int n_dn_;
  std::vector<std::uint32_t> up_masks_;
  std::vector<std::uint32_t> dn_masks_;
  std::vector<std::int32_t> up_rank_;
  std::vector<std::int32_t> dn_rank_;
  std::vector<FockState> states_;
};

SectorBasis build_sector(int n_dots, int n_up, int n_dn);

std::uint64_t binomial(int n, int k);

/// c_{dot,spin} applied to `s`; nullopt if the mode is empty.
std::optional<SignedState> annihilate(const FockState& s, int dot, Spin spin);
/// c^dagger_{dot,spin} applied to `s`; nullopt if the mode is occupied.
std::optional<SignedState> create(const FockState& s, int dot, Spin spin);

/// c^dagger_{i,spin} c_{j,spin} applied to `s`. The sign is (-1) to the number
/// of occupied same-spin modes strictly between i and j; nullopt when j is
/// empty or i is already occupied.
std::optional<SignedState> hop(const FockState& s, int i, int j, Spin spin);

/// S+_i = c^dagger_{i,up} c_{i,dn} and S-_i = c^dagger_{i,dn} c_{i,up}.
std::optional<SignedState> spin_raise(const FockState& s, int dot);
std::optional<SignedState> spin_lower(const FockState& s, int dot);

/// Site relabeling c^dagger_{i,s} -> c^dagger_{perm[i],s}. The result is
/// reordered into canonical mode order; the sign is the parity of that
/// reordering.
SignedState relabel(const FockState& s, std::span<const int> perm);

inline int occupancy(const FockState& s, int dot) {
  return static_cast<int>((s.up >> dot) & 1u) + static_cast<int>((s.dn >> dot) & 1u);
}

}  // namespace pentadot
