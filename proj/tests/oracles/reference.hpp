#pragma once

// Slow, direct reimplementations used as test oracles. Nothing here calls the
// library's kernels; only plain data types are shared.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "avos/core/voxel_grid.hpp"
#include "avos/sensor/camera.hpp"
#include "avos/sensor/observation.hpp"
#include "avos/world/scene.hpp"

namespace ref {

using avos::Aabb;
using avos::Vec3;

// Entry parameter of the ray o + t d into box b, t >= 0, computed per axis
// without the library slab helper.
inline std::optional<double> ray_entry(Vec3 o, Vec3 d, const Aabb& b) {
  double lo = 0.0, hi = std::numeric_limits<double>::infinity();
  for (int a = 0; a < 3; ++a) {
    if (d[a] == 0.0) {
      if (o[a] < b.min[a] || o[a] > b.max[a]) return std::nullopt;
      continue;
    }
    double t1 = (b.min[a] - o[a]) / d[a];
    double t2 = (b.max[a] - o[a]) / d[a];
    if (t1 > t2) std::swap(t1, t2);
    lo = std::max(lo, t1);
    hi = std::min(hi, t2);
  }
  if (lo > hi) return std::nullopt;
  return lo;
}

// Unit world direction through pixel (u, v) from the pose basis vectors.
inline Vec3 pixel_ray(const avos::sensor::CameraModel& c, const avos::sensor::Pose& p, int u, int v) {
  const Vec3 f = p.forward();
  const Vec3 r = p.right();
  const Vec3 down = avos::cross(f, r);
  const Vec3 d = f + r * ((u - c.cx) / c.fx) + down * ((v - c.cy) / c.fy);
  return d / avos::norm(d);
}

struct RefPixel {
  int object_id = 0;
  double depth = 0.0;
};

// Every pixel against every object. Nearest entry wins, earlier objects win
// exact ties, hits beyond max_range count as misses.
inline std::vector<RefPixel> render(const avos::world::Scene& scene, const avos::sensor::Pose& pose,
                                    const avos::sensor::CameraModel& cam) {
  std::vector<RefPixel> out(static_cast<size_t>(cam.width) * cam.height);
  for (int v = 0; v < cam.height; ++v)
    for (int u = 0; u < cam.width; ++u) {
      const Vec3 d = pixel_ray(cam, pose, u, v);
      double best = std::numeric_limits<double>::infinity();
      int id = 0;
      for (const auto& o : scene.objects) {
        auto t = ray_entry(pose.position, d, o.box);
        if (t && *t < best) {
          best = *t;
          id = o.object_id;
        }
      }
      if (id != 0 && best <= cam.max_range) out[static_cast<size_t>(v) * cam.width + u] = {id, best};
    }
  return out;
}

// Length of segment a->b inside the open box.
inline double crossing_length(Vec3 a, Vec3 b, const Aabb& box) {
  const Vec3 d = b - a;
  double lo = 0.0, hi = 1.0;
  for (int k = 0; k < 3; ++k) {
    if (d[k] == 0.0) {
      if (a[k] <= box.min[k] || a[k] >= box.max[k]) return 0.0;
      continue;
    }
    double t1 = (box.min[k] - a[k]) / d[k];
    double t2 = (box.max[k] - a[k]) / d[k];
    if (t1 > t2) std::swap(t1, t2);
    lo = std::max(lo, t1);
    hi = std::min(hi, t2);
  }
  return hi > lo ? (hi - lo) * avos::norm(d) : 0.0;
}

// Visible-face masks per cell (index -> bits), testing every face against
// every occupied cell.
inline std::map<int64_t, uint8_t> visible_faces(const avos::GridSpec& spec,
                                                const std::vector<uint8_t>& occupied,
                                                const avos::sensor::Pose& pose,
                                                const avos::sensor::CameraModel& cam,
                                                double max_distance = -1.0) {
  const double reach = max_distance < 0 ? cam.max_range : std::min(max_distance, cam.max_range);
  const Vec3 eye = pose.position;
  std::vector<int64_t> occ;
  for (int64_t n = 0; n < spec.cell_count(); ++n)
    if (!occupied.empty() && occupied[static_cast<size_t>(n)]) occ.push_back(n);
  int64_t eye_cell = -1;
  if (auto c = spec.try_index(eye)) eye_cell = spec.linear(*c);

  std::map<int64_t, uint8_t> out;
  for (int64_t n = 0; n < spec.cell_count(); ++n) {
    const auto c = spec.unlinear(n);
    uint8_t mask = 0;
    for (int f = 0; f < avos::kFaceCount; ++f) {
      const Vec3 p = avos::face_center(spec, c, f);
      const Vec3 normal = avos::face_normal(f);
      if (avos::dot(eye - p, normal) <= 0.0) continue;
      if (avos::distance(eye, p) > reach) continue;
      const auto px = avos::sensor::project(p, cam, pose);
      if (!(px.depth > 0.0)) continue;
      if (px.u < 0 || px.v < 0 || px.u > cam.width - 1 || px.v > cam.height - 1) continue;
      bool blocked = false;
      for (int64_t m : occ) {
        if (m == n || m == eye_cell) continue;
        if (crossing_length(eye, p, spec.cell_box(spec.unlinear(m))) > 1e-9) {
          blocked = true;
          break;
        }
      }
      if (!blocked) mask = static_cast<uint8_t>(mask | (1u << f));
    }
    if (mask) out[n] = mask;
  }
  return out;
}

inline bool lex_less(Vec3 a, Vec3 b) {
  if (a.x != b.x) return a.x < b.x;
  if (a.y != b.y) return a.y < b.y;
  return a.z < b.z;
}

// Textbook DBSCAN over the full distance matrix. Core: >= min_pts points
// within eps counting itself. Core points within eps share a cluster; a
// border point joins its nearest core point (ties to the lexicographically
// smaller core). Clusters are numbered by their lexicographically smallest
// member; noise is -1.
inline std::vector<int> dbscan(const std::vector<Vec3>& pts, double eps, int min_pts) {
  const size_t n = pts.size();
  std::vector<std::vector<char>> near(n, std::vector<char>(n, 0));
  std::vector<char> core(n, 0);
  for (size_t a = 0; a < n; ++a) {
    int count = 0;
    for (size_t b = 0; b < n; ++b) {
      const Vec3 d = pts[a] - pts[b];
      near[a][b] = avos::dot(d, d) <= eps * eps;
      count += near[a][b];
    }
    core[a] = count >= min_pts;
  }
  std::vector<int> comp(n, -1);
  int next = 0;
  for (size_t s = 0; s < n; ++s) {
    if (!core[s] || comp[s] >= 0) continue;
    std::vector<size_t> stack{s};
    comp[s] = next;
    while (!stack.empty()) {
      const size_t a = stack.back();
      stack.pop_back();
      for (size_t b = 0; b < n; ++b)
        if (core[b] && near[a][b] && comp[b] < 0) {
          comp[b] = next;
          stack.push_back(b);
        }
    }
    ++next;
  }
  for (size_t a = 0; a < n; ++a) {
    if (core[a]) continue;
    long best = -1;
    for (size_t b = 0; b < n; ++b) {
      if (!core[b] || !near[a][b]) continue;
      if (best < 0) {
        best = static_cast<long>(b);
        continue;
      }
      const double db = avos::distance(pts[a], pts[b]);
      const double dc = avos::distance(pts[a], pts[static_cast<size_t>(best)]);
      if (db < dc || (db == dc && lex_less(pts[b], pts[static_cast<size_t>(best)])))
        best = static_cast<long>(b);
    }
    if (best >= 0) comp[a] = comp[static_cast<size_t>(best)];
  }
  std::vector<long> smallest(static_cast<size_t>(next), -1);
  for (size_t a = 0; a < n; ++a) {
    if (comp[a] < 0) continue;
    long& s = smallest[static_cast<size_t>(comp[a])];
    if (s < 0 || lex_less(pts[a], pts[static_cast<size_t>(s)])) s = static_cast<long>(a);
  }
  std::vector<int> order(static_cast<size_t>(next));
  for (int c = 0; c < next; ++c) order[static_cast<size_t>(c)] = c;
  std::sort(order.begin(), order.end(), [&](int x, int y) {
    return lex_less(pts[static_cast<size_t>(smallest[static_cast<size_t>(x)])],
                    pts[static_cast<size_t>(smallest[static_cast<size_t>(y)])]);
  });
  std::vector<int> rank(static_cast<size_t>(next));
  for (int r = 0; r < next; ++r) rank[static_cast<size_t>(order[static_cast<size_t>(r)])] = r;
  std::vector<int> out(n, -1);
  for (size_t a = 0; a < n; ++a)
    if (comp[a] >= 0) out[a] = rank[static_cast<size_t>(comp[a])];
  return out;
}

// Per-cell label vote counts rebuilt from raw pixels: each labelled pixel
// with positive ray length lands in the cell containing the point 1 um past
// the surface along its ray. After each observation a touched cell takes the
// label with most votes, keeping its current label on a tie and otherwise
// preferring the smaller name.
struct Recount {
  std::map<int64_t, std::map<uint16_t, uint32_t>> votes;
  std::map<int64_t, uint16_t> label;

  void add(const avos::GridSpec& spec, const avos::sensor::Observation& obs,
           const std::vector<uint16_t>& labels, const avos::sensor::CameraModel& cam,
           const std::vector<std::string>& names) {
    std::vector<int64_t> touched;
    for (int v = 0; v < obs.height; ++v)
      for (int u = 0; u < obs.width; ++u) {
        const size_t px = obs.at(u, v);
        const double len = obs.depth[px];
        const uint16_t l = labels[px];
        if (len <= 0.0 || l <= 1) continue;
        const Vec3 p = obs.pose.position + pixel_ray(cam, obs.pose, u, v) * (len + 1e-6);
        if (auto c = spec.try_index(p)) {
          ++votes[spec.linear(*c)][l];
          touched.push_back(spec.linear(*c));
        }
      }
    for (int64_t cell : touched) {
      const auto& h = votes[cell];
      uint32_t top = 0;
      for (const auto& [l, n] : h) top = std::max(top, n);
      uint16_t cur = label.count(cell) ? label[cell] : 0;
      if (cur != 0 && h.count(cur) && h.at(cur) == top) continue;
      uint16_t best = 0;
      for (const auto& [l, n] : h)
        if (n == top && (best == 0 || names[l] < names[best])) best = l;
      label[cell] = best;
    }
  }

  uint16_t at(int64_t cell) const {
    auto it = label.find(cell);
    return it == label.end() ? 0 : it->second;
  }
};

}  // namespace ref
