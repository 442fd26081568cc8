#pragma once

#include <vector>

#include "avos/sensor/observation.hpp"
#include "avos/world/scene.hpp"

namespace avos::kernels {

/// Inputs shared by the serial and parallel raster kernels.
struct RenderJob {
  const world::Scene* scene = nullptr;
  sensor::CameraModel camera;
  sensor::Pose pose;
  // Indices into scene->objects that can be hit within max_range, in scene order.
  std::vector<int> candidates;
};

RenderJob make_render_job(const world::Scene& scene, const sensor::Pose& pose,
                          const sensor::CameraModel& camera);

/// Reference kernel: one ray per pixel, rows in order.
void render_serial(const RenderJob& job, sensor::Observation& out);
/// OpenMP over rows. Bit-identical to render_serial.
void render_parallel(const RenderJob& job, sensor::Observation& out);

}  // namespace avos::kernels
