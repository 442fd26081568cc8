#include "avos/planner/exploitation.hpp"

#include <algorithm>

namespace avos::planner {

std::vector<int64_t> max_attraction_cells(const mapping::CognitiveGrid& cog) {
  const auto& c = cog.values();
  double mx = 0.0;
  for (double v : c) mx = std::max(mx, v);
  std::vector<int64_t> out;
  if (mx <= 0.0) return out;
  for (size_t n = 0; n < c.size(); ++n)
    if (c[n] >= mx - kMaxSetTolerance) out.push_back(static_cast<int64_t>(n));
  return out;
}

std::optional<ExploitationAdvice> exploitation_target(const mapping::CognitiveGrid& cog,
                                                      Vec3 agent, const DbscanParams& params) {
  const auto cells = max_attraction_cells(cog);
  if (cells.empty()) return std::nullopt;
  const GridSpec& spec = cog.spec();
  std::vector<Vec3> pts;
  pts.reserve(cells.size());
  double mx = 0.0;
  for (int64_t idx : cells) {
    pts.push_back(spec.cell_center(spec.unlinear(idx)));
    mx = std::max(mx, cog.value(idx));
  }
  const auto labels = dbscan(pts, params);
  int clusters = 0;
  for (int l : labels) clusters = std::max(clusters, l + 1);
  if (clusters == 0) return std::nullopt;

  std::vector<int> size(static_cast<size_t>(clusters), 0);
  std::vector<Vec3> sum(static_cast<size_t>(clusters));
  for (size_t n = 0; n < pts.size(); ++n) {
    if (labels[n] < 0) continue;
    ++size[static_cast<size_t>(labels[n])];
    sum[static_cast<size_t>(labels[n])] += pts[n];
  }
  int best = 0;
  for (int c = 1; c < clusters; ++c) {
    const auto cs = static_cast<size_t>(c), bs = static_cast<size_t>(best);
    if (size[cs] > size[bs]) {
      best = c;
    } else if (size[cs] == size[bs]) {
      const double dc = distance(sum[cs] / size[cs], agent);
      const double db = distance(sum[bs] / size[bs], agent);
      if (dc < db) best = c;
    }
  }

  ExploitationAdvice adv;
  const auto bs = static_cast<size_t>(best);
  adv.target = sum[bs] / size[bs];
  adv.attraction = mx;
  adv.cluster_size = size[bs];
  bool first = true;
  for (size_t n = 0; n < pts.size(); ++n) {
    if (labels[n] != best) continue;
    const Aabb box = spec.cell_box(spec.unlinear(cells[n]));
    if (first) {
      adv.cluster_box = box;
      first = false;
    } else {
      for (int a = 0; a < 3; ++a) {
        adv.cluster_box.min[a] = std::min(adv.cluster_box.min[a], box.min[a]);
        adv.cluster_box.max[a] = std::max(adv.cluster_box.max[a], box.max[a]);
      }
    }
    adv.cells.push_back(cells[n]);
    adv.centers.push_back(pts[n]);
  }
  return adv;
}

}  // namespace avos::planner
