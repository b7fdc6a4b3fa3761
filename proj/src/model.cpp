#include "pentadot/model.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>
#include <string>

namespace pentadot {

DeviceGraph::DeviceGraph(std::vector<Dot> dots, std::vector<Edge> edges)
    : dots_(std::move(dots)), edges_(std::move(edges)) {
  std::sort(dots_.begin(), dots_.end(), [](const Dot& a, const Dot& b) { return a.id < b.id; });
  for (std::size_t k = 0; k < dots_.size(); ++k) {
    if (dots_[k].id != static_cast<int>(k)) {
      throw std::invalid_argument("dot ids must be unique and contiguous from 0");
    }
  }
  const int n = static_cast<int>(dots_.size());
  std::set<EdgeKey> seen;
  for (auto& e : edges_) {
    if (e.i == e.j) throw std::invalid_argument("self edge on dot " + std::to_string(e.i));
    if (e.i < 0 || e.j < 0 || e.i >= n || e.j >= n) {
      throw std::invalid_argument("edge " + std::to_string(e.i) + "-" + std::to_string(e.j) +
                                  " refers to an unknown dot");
    }
    if (e.i > e.j) std::swap(e.i, e.j);
    if (!seen.insert(EdgeKey(e.i, e.j)).second) {
      throw std::invalid_argument("duplicate edge " + std::to_string(e.i) + "-" +
                                  std::to_string(e.j));
    }
  }
}

std::optional<std::size_t> DeviceGraph::find_edge(int i, int j) const {
  const EdgeKey key(i, j);
  for (std::size_t k = 0; k < edges_.size(); ++k) {
    if (EdgeKey(edges_[k].i, edges_[k].j) == key) return k;
  }
  return std::nullopt;
}

bool DeviceDelta::empty() const {
  const bool edges_zero = std::all_of(edge_deltas.begin(), edge_deltas.end(),
                                      [](const auto& kv) { return kv.second == 0.0; });
  const bool sites_zero = std::all_of(site_deltas.begin(), site_deltas.end(), [](const auto& kv) {
    return kv.second.dmu == 0.0 && kv.second.bz == 0.0;
  });
  return edges_zero && sites_zero;
}

DeviceDelta DeviceDelta::scaled(double factor) const {
  DeviceDelta out = *this;
  for (auto& [key, dt] : out.edge_deltas) dt *= factor;
  for (auto& [dot, sd] : out.site_deltas) {
    sd.dmu *= factor;
    sd.bz *= factor;
  }
  return out;
}

DeviceDelta& DeviceDelta::operator+=(const DeviceDelta& other) {
  for (const auto& [key, dt] : other.edge_deltas) edge_deltas[key] += dt;
  for (const auto& [dot, sd] : other.site_deltas) {
    auto& mine = site_deltas[dot];
    mine.dmu += sd.dmu;
    mine.bz += sd.bz;
  }
  return *this;
}

DeviceGraph five_dot(double t, double U, double mu, double mu_center_offset) {
  if (t == 0.0) throw std::invalid_argument("five_dot: tunneling t must be nonzero");
  if (!(U > 0.0)) throw std::invalid_argument("five_dot: U must be positive");
  std::vector<Dot> dots;
  dots.push_back({0, U, mu + mu_center_offset, 0.0});
  for (int k = 1; k <= 4; ++k) dots.push_back({k, U, mu, 0.0});
  std::vector<Edge> edges;
  for (int k = 1; k <= 4; ++k) edges.push_back({0, k, t});
  return DeviceGraph(std::move(dots), std::move(edges));
}

std::vector<std::pair<int, int>> default_coupling_edges() { return {{3, 6}, {4, 7}}; }

DeviceGraph two_qubit_device(double t, double U, double mu,
                             const std::vector<std::pair<int, int>>& coupling_edges) {
  if (t == 0.0) throw std::invalid_argument("two_qubit_device: tunneling t must be nonzero");
  if (!(U > 0.0)) throw std::invalid_argument("two_qubit_device: U must be positive");
  std::vector<Dot> dots;
  for (int k = 0; k < 10; ++k) dots.push_back({k, U, mu, 0.0});
  std::vector<Edge> edges;
  for (int k = 1; k <= 4; ++k) edges.push_back({0, k, t});
  for (int k = 6; k <= 9; ++k) edges.push_back({5, k, t});
  auto outer_a = [](int d) { return d >= 1 && d <= 4; };
  auto outer_b = [](int d) { return d >= 6 && d <= 9; };
  for (auto [i, j] : coupling_edges) {
    if (!((outer_a(i) && outer_b(j)) || (outer_b(i) && outer_a(j)))) {
      throw std::invalid_argument("coupling edge " + std::to_string(i) + "-" + std::to_string(j) +
                                  " must join an outer dot of qubit A (1-4) to one of qubit B (6-9)");
    }
    edges.push_back({i, j, 0.0});
  }
  return DeviceGraph(std::move(dots), std::move(edges));
}

DeviceGraph apply_delta(const DeviceGraph& g, const DeviceDelta& d) {
  std::vector<Dot> dots = g.dots();
  std::vector<Edge> edges = g.edges();
  for (const auto& [key, dt] : d.edge_deltas) {
    auto k = g.find_edge(key.lo, key.hi);
    if (!k) {
      throw std::invalid_argument("delta refers to unknown edge " + std::to_string(key.lo) + "-" +
                                  std::to_string(key.hi));
    }
    edges[*k].t += dt;
  }
  for (const auto& [dot, sd] : d.site_deltas) {
    if (dot < 0 || dot >= static_cast<int>(dots.size())) {
      throw std::invalid_argument("delta refers to unknown dot " + std::to_string(dot));
    }
    dots[dot].mu += sd.dmu;
    dots[dot].bz += sd.bz;
  }
  return DeviceGraph(std::move(dots), std::move(edges));
}

DeviceDelta tunneling_pulse(int center, std::vector<int> outer, double dt) {
  DeviceDelta d;
  for (int k : outer) d.edge_deltas[EdgeKey(center, k)] += dt;
  return d;
}

DeviceDelta coupling_pulse(const std::vector<std::pair<int, int>>& edges, double dt) {
  DeviceDelta d;
  for (auto [i, j] : edges) d.edge_deltas[EdgeKey(i, j)] += dt;
  return d;
}

}  // namespace pentadot
