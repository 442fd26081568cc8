#pragma once

#include <vector>

#include "avos/core/geometry.hpp"

namespace avos::planner {

struct DbscanParams {
  double eps = 3.0;  // m; 1.5 x the default cell
  int min_pts = 3;   // neighbourhood size including the point itself
};

inline constexpr int kNoise = -1;

/// Core points (>= min_pts points within eps, inclusive) are linked into
/// clusters when within eps of each other. A border point joins the cluster
/// of its nearest core point, ties going to the lexicographically smallest
/// core coordinates. Cluster ids are numbered by each cluster's
/// lexicographically smallest member. The partition does not depend on the
/// input order.
std::vector<int> dbscan(const std::vector<Vec3>& points, const DbscanParams& params);

bool lex_less(Vec3 a, Vec3 b);

}  // namespace avos::planner
