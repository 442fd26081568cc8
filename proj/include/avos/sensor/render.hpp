#pragma once

#include <filesystem>
#include <set>
#include <string>

#include "avos/core/labels.hpp"
#include "avos/sensor/observation.hpp"
#include "avos/world/scene.hpp"

namespace avos::sensor {

/// Nearest-box raycast per pixel. Throws when the pose is outside the scene
/// bounds or the camera is malformed.
Observation render(const world::Scene& scene, const Pose& pose, const CameraModel& camera,
                   int step_index = 0);
/// Same raster through the serial reference kernel.
Observation render_serial(const world::Scene& scene, const Pose& pose, const CameraModel& camera,
                          int step_index = 0);

struct NoiseConfig {
  double p_noise = 0.0;
  uint64_t seed = 0;
};

/// Per-pixel label map produced from ground truth, standing in for a
/// segmentation model.
struct SegmentedImage {
  int width = 0;
  int height = 0;
  std::vector<LabelId> labels;        // kUnknownId where nothing was hit
  std::vector<uint16_t> object_ids;
};

/// Labels come from the hit object's ground-truth label. With noise, each
/// hit pixel's label is independently replaced by a different scene label
/// with probability p_noise. Labels outside `related` become "ignored".
SegmentedImage segment(const Observation& obs, const world::Scene& scene,
                       const std::set<std::string>& related, LabelIndex& labels,
                       const NoiseConfig& noise = {});

/// color.png (RGB8), depth.png (16-bit millimetres, saturating) and ids.png
/// (16-bit object ids) under `dir` with the given file stem prefix.
void save_observation_pngs(const Observation& obs, const std::filesystem::path& dir,
                           const std::string& stem);

/// A close-up pose facing `object`, used to produce the task's target image.
/// Tries eight headings around the object and keeps the collision-free one
/// that shows the most target pixels. Throws Error when none is usable.
Pose target_view_pose(const world::Scene& scene, const world::SceneObject& object,
                      const CameraModel& camera);

/// Color image of the target from target_view_pose, saved as an RGB8 PNG.
void save_target_image(const world::Scene& scene, const world::SceneObject& object,
                       const CameraModel& camera, const std::filesystem::path& path);

}  // namespace avos::sensor
