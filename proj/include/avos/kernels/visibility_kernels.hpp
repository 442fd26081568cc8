#pragma once

#include <cstdint>
#include <vector>

#include "avos/core/voxel_grid.hpp"
#include "avos/sensor/camera.hpp"

namespace avos::kernels {

struct VisibleCell {
  int64_t index = 0;
  uint8_t faces = 0;  // bit f set when face f is visible
};

/// Coarse summary of an occupancy array: one flag per kBlock^3 cells, set
/// when any cell inside is occupied. Lets the DDA jump over empty space.
struct BlockGrid {
  static constexpr int kBlock = 4;
  int bx = 0, by = 0, bz = 0;
  std::vector<uint8_t> any;

  static BlockGrid build(const GridSpec& spec, const uint8_t* occupied);
  bool empty_at(int i, int j, int k) const {
    return !any[static_cast<size_t>(((k / kBlock) * by + j / kBlock) * bx + i / kBlock)];
  }
};

struct VisibilityQuery {
  const GridSpec* spec = nullptr;
  const uint8_t* occupied = nullptr;  // one byte per cell; nullptr = empty grid
  const BlockGrid* blocks = nullptr;  // optional acceleration, must match `occupied`
  sensor::CameraModel camera;
  sensor::Pose pose;
  double max_distance = -1.0;  // face-center distance cap; <0 uses camera.max_range
};

/// A face is visible when it is front-facing, its center is within range,
/// projects inside the raster with positive depth, and the segment from the
/// camera to the face center crosses no occupied cell with positive length.
/// The face's own cell and the camera's cell never occlude. Output is sorted
/// by cell index.
std::vector<VisibleCell> visible_serial(const VisibilityQuery& q);
std::vector<VisibleCell> visible_parallel(const VisibilityQuery& q);

/// True when the segment a->b crosses an occupied cell other than the two
/// excluded linear indices. Voxel DDA.
bool segment_occluded(const GridSpec& spec, const uint8_t* occupied, Vec3 a, Vec3 b,
                      int64_t skip_a, int64_t skip_b, const BlockGrid* blocks = nullptr);

/// Per-visible-cell sums of U * (1 - f(d)) over visible faces; d is the
/// distance from the cell center to `eye`.
struct RewardSums {
  double raw = 0.0;
  int64_t faces = 0;
};
RewardSums reward_serial(const GridSpec& spec, const std::vector<double>& faces, double alpha,
                         const std::vector<VisibleCell>& vis, Vec3 eye);
RewardSums reward_parallel(const GridSpec& spec, const std::vector<double>& faces, double alpha,
                           const std::vector<VisibleCell>& vis, Vec3 eye);

/// In-place U <- U * f(d) on visible faces. Returns the total reduction.
double attenuate_serial(const GridSpec& spec, std::vector<double>& faces, double alpha,
                        const std::vector<VisibleCell>& vis, Vec3 eye);
double attenuate_parallel(const GridSpec& spec, std::vector<double>& faces, double alpha,
                          const std::vector<VisibleCell>& vis, Vec3 eye);

}  // namespace avos::kernels
