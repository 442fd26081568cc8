#pragma once

#include <cstdint>
#include <vector>

#include <json.hpp>

#include "avos/core/voxel_grid.hpp"
#include "avos/kernels/visibility_kernels.hpp"
#include "avos/sensor/camera.hpp"

namespace avos::mapping {

using kernels::VisibleCell;

/// Faces visible from `pose` over the given occupancy (nullptr or empty for
/// an empty grid). `max_distance` < 0 uses the camera range.
std::vector<VisibleCell> visible_cells(const GridSpec& spec, const std::vector<uint8_t>& occupancy,
                                       const sensor::Pose& pose, const sensor::CameraModel& camera,
                                       double max_distance = -1.0);

struct RewardValue {
  double raw = 0.0;
  int64_t faces = 0;
  double normalized() const { return faces > 0 ? raw / static_cast<double>(faces) : 0.0; }
};

/// Per-face uncertainty in [0, 1], initialised to 1, attenuated by
/// f(d) = exp(-alpha d) with d the distance from the cell center to the eye.
class UncertaintyGrid {
 public:
  UncertaintyGrid(const GridSpec& spec, double alpha);

  const GridSpec& spec() const { return spec_; }
  double alpha() const { return alpha_; }
  double falloff(double d) const;

  double face(int64_t idx, int f) const { return faces_[static_cast<size_t>(idx) * kFaceCount + f]; }
  const std::vector<double>& faces() const { return faces_; }

  /// Applies the visible set. Returns the total reduction.
  double attenuate(const std::vector<VisibleCell>& vis, Vec3 eye);
  /// Sum of U (1 - f(d)) over the visible set without mutating the grid.
  RewardValue reward(const std::vector<VisibleCell>& vis, Vec3 eye) const;

  double mean() const;

  nlohmann::json dump() const;
  std::vector<float> cell_means() const;
  uint64_t digest() const;

 private:
  GridSpec spec_;
  double alpha_;
  std::vector<double> faces_;
};

}  // namespace avos::mapping
