#pragma once

#include <cstdint>
#include <vector>

#include "avos/sensor/camera.hpp"

namespace avos::sensor {

/// Per-step sensor bundle. Depth is the Euclidean ray length in metres
/// (0 = no hit within max_range); semantic_ids holds object ids (0 = none).
struct Observation {
  int width = 0;
  int height = 0;
  std::vector<uint8_t> color;          // RGB, 3 bytes per pixel
  std::vector<double> depth;           // metres
  std::vector<uint16_t> semantic_ids;  // object ids
  Pose pose;
  int step_index = 0;

  size_t pixel_count() const { return static_cast<size_t>(width) * height; }
  size_t at(int u, int v) const { return static_cast<size_t>(v) * width + u; }
};

}  // namespace avos::sensor
