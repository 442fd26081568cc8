#include "avos/planner/dbscan.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <unordered_map>

namespace avos::planner {

bool lex_less(Vec3 a, Vec3 b) {
  if (a.x != b.x) return a.x < b.x;
  if (a.y != b.y) return a.y < b.y;
  return a.z < b.z;
}

namespace {

struct Key {
  int64_t x, y, z;
  bool operator==(const Key&) const = default;
};

struct KeyHash {
  size_t operator()(const Key& k) const {
    uint64_t h = static_cast<uint64_t>(k.x) * 0x9e3779b97f4a7c15ULL;
    h ^= static_cast<uint64_t>(k.y) * 0xc2b2ae3d27d4eb4fULL + (h << 6) + (h >> 2);
    h ^= static_cast<uint64_t>(k.z) * 0x165667b19e3779f9ULL + (h << 6) + (h >> 2);
    return static_cast<size_t>(h);
  }
};

class SpatialHash {
 public:
  SpatialHash(const std::vector<Vec3>& pts, double cell) : pts_(pts), cell_(cell) {
    for (size_t n = 0; n < pts.size(); ++n) buckets_[key(pts[n])].push_back(static_cast<int>(n));
  }

  // Neighbours within eps, including the point itself, in ascending index order.
  std::vector<int> within(int n, double eps) const {
    std::vector<int> out;
    const Key k = key(pts_[static_cast<size_t>(n)]);
    const double eps2 = eps * eps;
    for (int64_t dz = -1; dz <= 1; ++dz)
      for (int64_t dy = -1; dy <= 1; ++dy)
        for (int64_t dx = -1; dx <= 1; ++dx) {
          auto it = buckets_.find({k.x + dx, k.y + dy, k.z + dz});
          if (it == buckets_.end()) continue;
          for (int m : it->second) {
            const Vec3 d = pts_[static_cast<size_t>(m)] - pts_[static_cast<size_t>(n)];
            if (dot(d, d) <= eps2) out.push_back(m);
          }
        }
    std::sort(out.begin(), out.end());
    return out;
  }

 private:
  Key key(Vec3 p) const {
    return {static_cast<int64_t>(std::floor(p.x / cell_)), static_cast<int64_t>(std::floor(p.y / cell_)),
            static_cast<int64_t>(std::floor(p.z / cell_))};
  }
  const std::vector<Vec3>& pts_;
  double cell_;
  std::unordered_map<Key, std::vector<int>, KeyHash> buckets_;
};

int find(std::vector<int>& parent, int x) {
  while (parent[static_cast<size_t>(x)] != x) {
    parent[static_cast<size_t>(x)] = parent[static_cast<size_t>(parent[static_cast<size_t>(x)])];
    x = parent[static_cast<size_t>(x)];
  }
  return x;
}

}  // namespace

std::vector<int> dbscan(const std::vector<Vec3>& points, const DbscanParams& params) {
  const int n = static_cast<int>(points.size());
  std::vector<int> labels(points.size(), kNoise);
  if (n == 0 || !(params.eps > 0.0)) return labels;

  const SpatialHash grid(points, params.eps);
  std::vector<std::vector<int>> nbrs(points.size());
  std::vector<char> core(points.size(), 0);
  for (int p = 0; p < n; ++p) {
    nbrs[static_cast<size_t>(p)] = grid.within(p, params.eps);
    core[static_cast<size_t>(p)] = static_cast<int>(nbrs[static_cast<size_t>(p)].size()) >= params.min_pts;
  }

  std::vector<int> parent(points.size());
  std::iota(parent.begin(), parent.end(), 0);
  for (int p = 0; p < n; ++p) {
    if (!core[static_cast<size_t>(p)]) continue;
    for (int q : nbrs[static_cast<size_t>(p)])
      if (core[static_cast<size_t>(q)]) {
        const int a = find(parent, p), b = find(parent, q);
        if (a != b) parent[static_cast<size_t>(std::max(a, b))] = std::min(a, b);
      }
  }

  // Component root per point: core points by union-find, border points via
  // their nearest core neighbour.
  std::vector<int> root(points.size(), -1);
  for (int p = 0; p < n; ++p)
    if (core[static_cast<size_t>(p)]) root[static_cast<size_t>(p)] = find(parent, p);
  for (int p = 0; p < n; ++p) {
    if (core[static_cast<size_t>(p)]) continue;
    int best = -1;
    double best_d = 0.0;
    for (int q : nbrs[static_cast<size_t>(p)]) {
      if (!core[static_cast<size_t>(q)]) continue;
      const double d = distance(points[static_cast<size_t>(p)], points[static_cast<size_t>(q)]);
      if (best < 0 || d < best_d ||
          (d == best_d && lex_less(points[static_cast<size_t>(q)], points[static_cast<size_t>(best)]))) {
        best = q;
        best_d = d;
      }
    }
    if (best >= 0) root[static_cast<size_t>(p)] = root[static_cast<size_t>(best)];
  }

  // Canonical numbering by smallest member coordinates.
  std::unordered_map<int, int> smallest;  // root -> member index
  for (int p = 0; p < n; ++p) {
    const int r = root[static_cast<size_t>(p)];
    if (r < 0) continue;
    auto it = smallest.find(r);
    if (it == smallest.end() || lex_less(points[static_cast<size_t>(p)], points[static_cast<size_t>(it->second)]))
      smallest[r] = p;
  }
  std::vector<std::pair<int, int>> order;  // (member, root)
  for (const auto& [r, m] : smallest) order.emplace_back(m, r);
  std::sort(order.begin(), order.end(), [&](const auto& a, const auto& b) {
    return lex_less(points[static_cast<size_t>(a.first)], points[static_cast<size_t>(b.first)]);
  });
  std::unordered_map<int, int> id_of;
  for (size_t c = 0; c < order.size(); ++c) id_of[order[c].second] = static_cast<int>(c);
  for (int p = 0; p < n; ++p) {
    const int r = root[static_cast<size_t>(p)];
    if (r >= 0) labels[static_cast<size_t>(p)] = id_of[r];
  }
  return labels;
}

}  // namespace avos::planner
