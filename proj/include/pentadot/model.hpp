#pragma once

#include <compare>
#include <cstddef>
#include <map>
#include <optional>
#include <utility>
#include <vector>

namespace pentadot {

// Energies are in units of the reference tunneling |t0|, hbar = 1.

struct Dot {
  int id = 0;
  double U = 0.0;
  double mu = 0.0;
  // Zeeman field along z, enters as bz * (n_up - n_dn) / 2.
  double bz = 0.0;

  friend bool operator==(const Dot&, const Dot&) = default;
};

struct Edge {
  int i = 0;
  int j = 0;
  double t = 0.0;

  friend bool operator==(const Edge&, const Edge&) = default;
};

/// Undirected edge identifier, always stored with lo < hi.
struct EdgeKey {
  int lo = 0;
  int hi = 0;

  EdgeKey() = default;
  EdgeKey(int a, int b) : lo(a < b ? a : b), hi(a < b ? b : a) {}

  friend auto operator<=>(const EdgeKey&, const EdgeKey&) = default;
};

/// Dots with onsite parameters plus a tunneling graph. Immutable once built;
/// the constructor enforces contiguous ids, no self edges and no duplicates.
class DeviceGraph {
 public:
  DeviceGraph() = default;
  DeviceGraph(std::vector<Dot> dots, std::vector<Edge> edges);

  const std::vector<Dot>& dots() const { return dots_; }
  const std::vector<Edge>& edges() const { return edges_; }
  std::size_t n_dots() const { return dots_.size(); }
  std::optional<std::size_t> find_edge(int i, int j) const;

  friend bool operator==(const DeviceGraph&, const DeviceGraph&) = default;

 private:
  std::vector<Dot> dots_;
  std::vector<Edge> edges_;
};

struct SiteDelta {
  double dmu = 0.0;
  double bz = 0.0;

  friend bool operator==(const SiteDelta&, const SiteDelta&) = default;
};

/// Parameter shift applied on top of an idle device. Pulses are built from
/// these; scaling a delta scales every entry.
struct DeviceDelta {
  std::map<EdgeKey, double> edge_deltas;
  std::map<int, SiteDelta> site_deltas;

  bool empty() const;
  DeviceDelta scaled(double factor) const;
  DeviceDelta operator-() const { return scaled(-1.0); }
  DeviceDelta& operator+=(const DeviceDelta& other);
  friend DeviceDelta operator+(DeviceDelta a, const DeviceDelta& b) { return a += b; }

  friend bool operator==(const DeviceDelta&, const DeviceDelta&) = default;
};

/// Star geometry: center dot 0, outer dots 1..4 around the square (square
/// sides 1-2, 2-3, 3-4, 4-1), tunneling only between the center and each
/// outer dot. `mu_center_offset` is added to the center dot's mu.
DeviceGraph five_dot(double t, double U, double mu, double mu_center_offset = 0.0);

/// Two stars side by side: qubit A uses dots 0..4 (center 0), qubit B uses
/// dots 5..9 (center 5). Coupling edges join an outer dot of A to an outer
/// dot of B and start with t = 0; pulses switch them on through a delta.
DeviceGraph two_qubit_device(double t, double U, double mu,
                             const std::vector<std::pair<int, int>>& coupling_edges);

/// Default coupling pair for two_qubit_device: A's dots 3,4 face B's dots 6,7.
/// Keeps A's 1<->2 and B's 8<->9 exchanges and the A<->B mirror as symmetries.
std::vector<std::pair<int, int>> default_coupling_edges();

DeviceGraph apply_delta(const DeviceGraph& g, const DeviceDelta& d);

/// Delta raising the tunneling on the center-to-outer edges of one star.
/// `center` is 0 for qubit A, 5 for qubit B; outer ids are absolute.
DeviceDelta tunneling_pulse(int center, std::vector<int> outer, double dt);

/// Delta switching on the given coupling edges by dt each.
DeviceDelta coupling_pulse(const std::vector<std::pair<int, int>>& edges, double dt);

}  // namespace pentadot
