#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "avos/mapping/cognitive_map.hpp"
#include "avos/planner/dbscan.hpp"

namespace avos::planner {

struct ExploitationAdvice {
  Vec3 target;             // p_m, centroid of the chosen cluster's cell centers
  double attraction = 0.0;  // the grid maximum
  int cluster_size = 0;     // cells
  Aabb cluster_box;         // union of the cluster's cell boxes
  std::vector<int64_t> cells;
  std::vector<Vec3> centers;  // cell centers, same order as `cells`
};

inline constexpr double kMaxSetTolerance = 1e-9;

/// Cells within kMaxSetTolerance of the grid maximum, in index order. Empty
/// when the maximum is 0.
std::vector<int64_t> max_attraction_cells(const mapping::CognitiveGrid& cog);

/// Largest DBSCAN cluster of the max set; size ties go to the centroid
/// nearest `agent`, then to the lower cluster id. No advice when the max is 0
/// or every point is noise.
std::optional<ExploitationAdvice> exploitation_target(const mapping::CognitiveGrid& cog,
                                                      Vec3 agent, const DbscanParams& params);

}  // namespace avos::planner
