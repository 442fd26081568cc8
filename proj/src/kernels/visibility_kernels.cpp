#include "avos/kernels/visibility_kernels.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

namespace avos::kernels {
namespace {

constexpr double kMinCrossing = 1e-9;

struct Frame {
  Mat3 R;
  Vec3 t;
  Mat3 K;
  // Unit inward normals of the four side planes of the raster frustum, in
  // camera coordinates.
  std::array<Vec3, 4> planes;
};

struct Range {
  int lo[3];
  int hi[3];  // inclusive
};

Range candidate_range(const GridSpec& spec, Vec3 eye, double reach) {
  Range r{};
  for (int a = 0; a < 3; ++a) {
    const double lo = (eye[a] - reach - spec.bounds.min[a]) / spec.cell[a];
    const double hi = (eye[a] + reach - spec.bounds.min[a]) / spec.cell[a];
    const int n = a == 0 ? spec.nx : (a == 1 ? spec.ny : spec.nz);
    r.lo[a] = std::clamp(static_cast<int>(std::floor(lo)), 0, n - 1);
    r.hi[a] = std::clamp(static_cast<int>(std::floor(hi)), 0, n - 1);
  }
  return r;
}

double reach_of(const VisibilityQuery& q) {
  return q.max_distance < 0.0 ? q.camera.max_range : std::min(q.max_distance, q.camera.max_range);
}

uint8_t cell_faces(const VisibilityQuery& q, const Frame& fr, CellIndex c, int64_t idx,
                   int64_t eye_idx, double reach) {
  const GridSpec& spec = *q.spec;
  const Vec3 eye = q.pose.position;
  const Vec3 center = spec.cell_center(c);
  const double half_diag = 0.5 * norm(spec.cell);
  if (distance(center, eye) > reach + half_diag) return 0;
  // Whole-cell frustum cull; every face center is within half_diag of the
  // cell center.
  const Vec3 cc = fr.R * center + fr.t;
  if (cc.z <= -half_diag) return 0;
  for (const Vec3& n : fr.planes)
    if (dot(n, cc) < -half_diag) return 0;
  uint8_t mask = 0;
  for (int f = 0; f < kFaceCount; ++f) {
    const int axis = f / 2;
    const double sign = (f % 2 == 0) ? -1.0 : 1.0;
    Vec3 p = center;
    p[axis] += sign * 0.5 * spec.cell[axis];
    if (sign * (eye[axis] - p[axis]) <= 0.0) continue;
    const Vec3 delta = p - eye;
    if (dot(delta, delta) > reach * reach) continue;
    const Vec3 pc = fr.R * p + fr.t;
    if (!(pc.z > 0.0)) continue;
    const double u = (fr.K(0, 0) * pc.x + fr.K(0, 2) * pc.z) / pc.z;
    const double v = (fr.K(1, 1) * pc.y + fr.K(1, 2) * pc.z) / pc.z;
    if (u < 0.0 || v < 0.0 || u > q.camera.width - 1 || v > q.camera.height - 1) continue;
    if (q.occupied && segment_occluded(spec, q.occupied, eye, p, idx, eye_idx, q.blocks)) continue;
    mask = static_cast<uint8_t>(mask | (1u << f));
  }
  return mask;
}

void slice(const VisibilityQuery& q, const Frame& fr, const Range& r, int k, int64_t eye_idx,
           double reach, std::vector<VisibleCell>& out) {
  for (int j = r.lo[1]; j <= r.hi[1]; ++j)
    for (int i = r.lo[0]; i <= r.hi[0]; ++i) {
      const CellIndex c{i, j, k};
      const int64_t idx = q.spec->linear(c);
      const uint8_t m = cell_faces(q, fr, c, idx, eye_idx, reach);
      if (m) out.push_back({idx, m});
    }
}

Frame frame_of(const VisibilityQuery& q) {
  Frame f{q.pose.rotation(), q.pose.translation(), q.camera.intrinsics(), {}};
  const auto& c = q.camera;
  // u >= 0, u <= W-1, v >= 0, v <= H-1 as half-spaces through the origin.
  f.planes[0] = normalized(Vec3{c.fx, 0.0, c.cx});
  f.planes[1] = normalized(Vec3{-c.fx, 0.0, (c.width - 1) - c.cx});
  f.planes[2] = normalized(Vec3{0.0, c.fy, c.cy});
  f.planes[3] = normalized(Vec3{0.0, -c.fy, (c.height - 1) - c.cy});
  return f;
}

int64_t eye_index(const GridSpec& spec, Vec3 eye) {
  auto c = spec.try_index(eye);
  return c ? spec.linear(*c) : -1;
}

}  // namespace

BlockGrid BlockGrid::build(const GridSpec& spec, const uint8_t* occupied) {
  BlockGrid g;
  g.bx = (spec.nx + kBlock - 1) / kBlock;
  g.by = (spec.ny + kBlock - 1) / kBlock;
  g.bz = (spec.nz + kBlock - 1) / kBlock;
  g.any.assign(static_cast<size_t>(g.bx) * g.by * g.bz, 0);
  if (!occupied) return g;
  for (int k = 0; k < spec.nz; ++k)
    for (int j = 0; j < spec.ny; ++j) {
      const uint8_t* row = occupied + (static_cast<int64_t>(k) * spec.ny + j) * spec.nx;
      for (int i = 0; i < spec.nx; ++i)
        if (row[i]) g.any[static_cast<size_t>(((k / kBlock) * g.by + j / kBlock) * g.bx + i / kBlock)] = 1;
    }
  return g;
}

bool segment_occluded(const GridSpec& spec, const uint8_t* occupied, Vec3 a, Vec3 b,
                      int64_t skip_a, int64_t skip_b, const BlockGrid* blocks) {
  const Vec3 d = b - a;
  double t = 0.0;
  double t_end = 1.0;
  if (!spec.bounds.contains(a) || !spec.bounds.contains(b)) {
    // Clip the segment to the grid box.
    auto iv = slab_interval(a, d, spec.bounds);
    if (!iv) return false;
    t = std::max(iv->first, 0.0);
    t_end = std::min(iv->second, 1.0);
  }
  if (t_end - t <= kMinCrossing) return false;

  const Vec3 start = a + d * t;
  const int n[3] = {spec.nx, spec.ny, spec.nz};
  int cell[3];
  int step[3];
  double t_max[3];
  double t_delta[3];
  for (int ax = 0; ax < 3; ++ax) {
    int c = static_cast<int>(std::floor((start[ax] - spec.bounds.min[ax]) / spec.cell[ax]));
    c = std::clamp(c, 0, n[ax] - 1);
    // A start exactly on a boundary moving in the negative direction belongs
    // to the lower cell.
    const double lo = spec.bounds.min[ax] + c * spec.cell[ax];
    if (d[ax] < 0.0 && start[ax] == lo && c > 0) --c;
    cell[ax] = c;
    if (d[ax] > 0.0) {
      step[ax] = 1;
      const double edge = spec.bounds.min[ax] + (c + 1) * spec.cell[ax];
      t_max[ax] = (edge - a[ax]) / d[ax];
      t_delta[ax] = spec.cell[ax] / d[ax];
    } else if (d[ax] < 0.0) {
      step[ax] = -1;
      const double edge = spec.bounds.min[ax] + c * spec.cell[ax];
      t_max[ax] = (edge - a[ax]) / d[ax];
      t_delta[ax] = -spec.cell[ax] / d[ax];
    } else {
      step[ax] = 0;
      t_max[ax] = std::numeric_limits<double>::infinity();
      t_delta[ax] = std::numeric_limits<double>::infinity();
    }
  }

  const auto edge_t = [&](int ax2) {
    const int e = step[ax2] > 0 ? cell[ax2] + 1 : cell[ax2];
    return (spec.bounds.min[ax2] + e * spec.cell[ax2] - a[ax2]) / d[ax2];
  };

  while (t < t_end) {
    if (blocks && blocks->empty_at(cell[0], cell[1], cell[2])) {
      // Jump to where the segment leaves this empty block.
      constexpr int B = BlockGrid::kBlock;
      int lo[3], hi[3];
      for (int a2 = 0; a2 < 3; ++a2) {
        lo[a2] = (cell[a2] / B) * B;
        hi[a2] = std::min(lo[a2] + B, n[a2]) - 1;
      }
      int exit_ax = -1;
      double t_exit = std::numeric_limits<double>::infinity();
      for (int a2 = 0; a2 < 3; ++a2) {
        if (step[a2] == 0) continue;
        const int e = step[a2] > 0 ? hi[a2] + 1 : lo[a2];
        const double te = (spec.bounds.min[a2] + e * spec.cell[a2] - a[a2]) / d[a2];
        if (te < t_exit) {
          t_exit = te;
          exit_ax = a2;
        }
      }
      if (exit_ax < 0 || t_exit >= t_end) return false;
      const Vec3 p = a + d * t_exit;
      for (int a2 = 0; a2 < 3; ++a2) {
        if (a2 == exit_ax) {
          cell[a2] = step[a2] > 0 ? hi[a2] + 1 : lo[a2] - 1;
        } else {
          const int c = static_cast<int>(std::floor((p[a2] - spec.bounds.min[a2]) / spec.cell[a2]));
          cell[a2] = std::clamp(c, lo[a2], hi[a2]);
        }
      }
      if (cell[exit_ax] < 0 || cell[exit_ax] >= n[exit_ax]) return false;
      t = t_exit;
      for (int a2 = 0; a2 < 3; ++a2)
        if (step[a2] != 0) t_max[a2] = edge_t(a2);
      continue;
    }
    int ax = 0;
    if (t_max[1] < t_max[ax]) ax = 1;
    if (t_max[2] < t_max[ax]) ax = 2;
    const double t_next = std::min(t_max[ax], t_end);
    if (t_next - t > kMinCrossing) {
      const int64_t idx = (static_cast<int64_t>(cell[2]) * spec.ny + cell[1]) * spec.nx + cell[0];
      if (idx != skip_a && idx != skip_b && occupied[idx]) return true;
    }
    if (t_max[ax] >= t_end) break;
    t = t_max[ax];
    cell[ax] += step[ax];
    if (cell[ax] < 0 || cell[ax] >= n[ax]) break;
    t_max[ax] += t_delta[ax];
  }
  return false;
}

std::vector<VisibleCell> visible_serial(const VisibilityQuery& q) {
  std::vector<VisibleCell> out;
  const double reach = reach_of(q);
  const Frame fr = frame_of(q);
  const Range r = candidate_range(*q.spec, q.pose.position, reach + norm(q.spec->cell));
  const int64_t eye_idx = eye_index(*q.spec, q.pose.position);
  for (int k = r.lo[2]; k <= r.hi[2]; ++k) slice(q, fr, r, k, eye_idx, reach, out);
  return out;
}

std::vector<VisibleCell> visible_parallel(const VisibilityQuery& q) {
  const double reach = reach_of(q);
  const Frame fr = frame_of(q);
  const Range r = candidate_range(*q.spec, q.pose.position, reach + norm(q.spec->cell));
  const int64_t eye_idx = eye_index(*q.spec, q.pose.position);
  const int rows = r.hi[1] - r.lo[1] + 1;
  const int slices = r.hi[2] - r.lo[2] + 1;
  // One bucket per (k, j) row keeps the output in linear order.
  std::vector<std::vector<VisibleCell>> buckets(static_cast<size_t>(rows) * slices);
#pragma omp parallel for schedule(dynamic, 4)
  for (int b = 0; b < rows * slices; ++b) {
    const int k = r.lo[2] + b / rows;
    const int j = r.lo[1] + b % rows;
    auto& out = buckets[static_cast<size_t>(b)];
    for (int i = r.lo[0]; i <= r.hi[0]; ++i) {
      const CellIndex c{i, j, k};
      const int64_t idx = q.spec->linear(c);
      const uint8_t m = cell_faces(q, fr, c, idx, eye_idx, reach);
      if (m) out.push_back({idx, m});
    }
  }
  std::vector<VisibleCell> out;
  size_t total = 0;
  for (const auto& b : buckets) total += b.size();
  out.reserve(total);
  for (const auto& b : buckets) out.insert(out.end(), b.begin(), b.end());
  return out;
}

namespace {

double cell_reward(const GridSpec& spec, const std::vector<double>& faces, double alpha,
                   const VisibleCell& vc, Vec3 eye, int64_t& count) {
  const double f = std::exp(-alpha * distance(spec.cell_center(spec.unlinear(vc.index)), eye));
  const double* u = &faces[static_cast<size_t>(vc.index) * kFaceCount];
  double s = 0.0;
  for (int k = 0; k < kFaceCount; ++k)
    if (vc.faces & (1u << k)) {
      s += u[k] - u[k] * f;
      ++count;
    }
  return s;
}

double cell_attenuate(const GridSpec& spec, std::vector<double>& faces, double alpha,
                      const VisibleCell& vc, Vec3 eye) {
  const double f = std::exp(-alpha * distance(spec.cell_center(spec.unlinear(vc.index)), eye));
  double* u = &faces[static_cast<size_t>(vc.index) * kFaceCount];
  double s = 0.0;
  for (int k = 0; k < kFaceCount; ++k)
    if (vc.faces & (1u << k)) {
      const double next = u[k] * f;
      s += u[k] - next;
      u[k] = next;
    }
  return s;
}

}  // namespace

RewardSums reward_serial(const GridSpec& spec, const std::vector<double>& faces, double alpha,
                         const std::vector<VisibleCell>& vis, Vec3 eye) {
  RewardSums out;
  for (const auto& vc : vis) out.raw += cell_reward(spec, faces, alpha, vc, eye, out.faces);
  return out;
}

RewardSums reward_parallel(const GridSpec& spec, const std::vector<double>& faces, double alpha,
                           const std::vector<VisibleCell>& vis, Vec3 eye) {
  const auto n = static_cast<int64_t>(vis.size());
  std::vector<double> part(vis.size());
  std::vector<int64_t> counts(vis.size(), 0);
#pragma omp parallel for schedule(static)
  for (int64_t m = 0; m < n; ++m)
    part[static_cast<size_t>(m)] =
        cell_reward(spec, faces, alpha, vis[static_cast<size_t>(m)], eye, counts[static_cast<size_t>(m)]);
  // Serial sum in index order keeps the result identical to reward_serial.
  RewardSums out;
  for (size_t m = 0; m < vis.size(); ++m) {
    out.raw += part[m];
    out.faces += counts[m];
  }
  return out;
}

double attenuate_serial(const GridSpec& spec, std::vector<double>& faces, double alpha,
                        const std::vector<VisibleCell>& vis, Vec3 eye) {
  double total = 0.0;
  for (const auto& vc : vis) total += cell_attenuate(spec, faces, alpha, vc, eye);
  return total;
}

double attenuate_parallel(const GridSpec& spec, std::vector<double>& faces, double alpha,
                          const std::vector<VisibleCell>& vis, Vec3 eye) {
  const auto n = static_cast<int64_t>(vis.size());
  std::vector<double> part(vis.size());
#pragma omp parallel for schedule(static)
  for (int64_t m = 0; m < n; ++m)
    part[static_cast<size_t>(m)] = cell_attenuate(spec, faces, alpha, vis[static_cast<size_t>(m)], eye);
  double total = 0.0;
  for (double p : part) total += p;
  return total;
}

}  // namespace avos::kernels
