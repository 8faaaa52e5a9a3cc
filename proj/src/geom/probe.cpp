#include "sobex/geom/probe.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <random>

namespace sobex::geom {

namespace {

std::vector<int> shortest_path(const WhitneyCover& cover, int from, int to) {
  const auto& adj = cover.adjacency();
  std::size_t m = cover.cubes.size();
  std::vector<double> dist_to(m, std::numeric_limits<double>::infinity());
  std::vector<int> prev(m, -1);
  using Item = std::pair<double, int>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
  dist_to[from] = 0;
  pq.push({0.0, from});
  while (!pq.empty()) {
    auto [d, u] = pq.top();
    pq.pop();
    if (d > dist_to[u]) continue;
    if (u == to) break;
    for (int v : adj[u]) {
      double w = dist(cover.cube_center(u), cover.cube_center(v));
      if (d + w < dist_to[v]) {
        dist_to[v] = d + w;
        prev[v] = u;
        pq.push({d + w, v});
      }
    }
  }
  if (!std::isfinite(dist_to[to])) return {};
  std::vector<int> path;
  for (int v = to; v != -1; v = prev[v]) path.push_back(v);
  std::reverse(path.begin(), path.end());
  return path;
}

}  // namespace

ProbeResult epsilon_delta_probe(const WhitneyCover& cover, int samples, std::uint64_t seed) {
  std::vector<int> regular;
  for (std::size_t i = 0; i < cover.cubes.size(); ++i)
    if (!cover.cubes[i].truncated) regular.push_back(static_cast<int>(i));
  if (regular.size() < 2) throw EmptyDomain("probe needs at least two cubes");

  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::size_t> pick(0, regular.size() - 1);

  ProbeResult res;
  res.eps = std::numeric_limits<double>::infinity();
  for (int s = 0; s < samples; ++s) {
    int a = regular[pick(rng)];
    int b = regular[pick(rng)];
    if (a == b) continue;
    auto path = shortest_path(cover, a, b);
    if (path.empty()) throw Disconnected("no Whitney path between sampled cubes");
    Pt x = cover.cube_center(a), y = cover.cube_center(b);
    double sep = dist(x, y);
    double length = 0;
    for (std::size_t i = 0; i + 1 < path.size(); ++i)
      length += dist(cover.cube_center(path[i]), cover.cube_center(path[i + 1]));
    double eps_len = sep / std::max(length, 1e-300);
    // cigar condition along polyline samples (skip the endpoints where the
    // bound is vacuous)
    double eps_cigar = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i + 1 < path.size(); ++i) {
      Pt p0 = cover.cube_center(path[i]);
      Pt p1 = cover.cube_center(path[i + 1]);
      for (int t = 0; t <= 8; ++t) {
        Pt z = p0 + (t / 8.0) * (p1 - p0);
        double dzx = dist(z, x), dzy = dist(z, y);
        if (dzx < 1e-12 || dzy < 1e-12) continue;
        double dz = cover.oracle->boundary_distance(z);
        eps_cigar = std::min(eps_cigar, dz * sep / (dzx * dzy));
      }
    }
    res.eps = std::min(res.eps, std::min(eps_len, eps_cigar));
    res.worst_length_ratio = std::max(res.worst_length_ratio, length / sep);
    ++res.pairs;
  }
  return res;
}

}  // namespace sobex::geom
