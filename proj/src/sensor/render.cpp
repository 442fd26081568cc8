#include "avos/sensor/render.hpp"

#include <algorithm>
#include <cmath>

#include "avos/core/image_io.hpp"
#include "avos/core/rng.hpp"
#include "avos/kernels/render_kernels.hpp"

namespace avos::sensor {
namespace {

void check_inputs(const world::Scene& scene, const Pose& pose, const CameraModel& camera) {
  if (auto v = camera.validate(); !v.empty()) throw ValidationError(std::move(v));
  if (!scene.bounds.contains(pose.position)) throw Error("render: pose outside scene bounds");
}

}  // namespace

Observation render(const world::Scene& scene, const Pose& pose, const CameraModel& camera,
                   int step_index) {
  check_inputs(scene, pose, camera);
  Observation obs;
  kernels::render_parallel(kernels::make_render_job(scene, pose, camera), obs);
  obs.step_index = step_index;
  return obs;
}

Observation render_serial(const world::Scene& scene, const Pose& pose, const CameraModel& camera,
                          int step_index) {
  check_inputs(scene, pose, camera);
  Observation obs;
  kernels::render_serial(kernels::make_render_job(scene, pose, camera), obs);
  obs.step_index = step_index;
  return obs;
}

SegmentedImage segment(const Observation& obs, const world::Scene& scene,
                       const std::set<std::string>& related, LabelIndex& labels,
                       const NoiseConfig& noise) {
  // Object id -> label id, plus the scene vocabulary for corruption draws.
  std::vector<LabelId> label_of_object(65536, kUnknownId);
  std::set<std::string> vocab_set;
  for (const auto& o : scene.objects) vocab_set.insert(o.label);
  std::vector<LabelId> vocab;
  for (const auto& l : vocab_set) vocab.push_back(labels.intern(l));
  for (const auto& o : scene.objects)
    label_of_object[static_cast<size_t>(o.object_id)] = labels.find(o.label);
  std::vector<bool> keep(labels.size() + vocab.size() + 2, false);
  for (const auto& l : related) {
    const LabelId id = labels.intern(l);
    if (id >= keep.size()) keep.resize(id + 1u, false);
    keep[id] = true;
  }

  SegmentedImage seg;
  seg.width = obs.width;
  seg.height = obs.height;
  seg.labels.assign(obs.pixel_count(), kUnknownId);
  seg.object_ids = obs.semantic_ids;
  const uint64_t seed = mix_seed(noise.seed, static_cast<uint64_t>(obs.step_index));
  for (size_t px = 0; px < obs.pixel_count(); ++px) {
    const uint16_t id = obs.semantic_ids[px];
    if (id == 0 || obs.depth[px] <= 0.0) continue;
    LabelId label = label_of_object[id];
    if (noise.p_noise > 0.0 && vocab.size() > 1 && hash_uniform(seed, px * 2) < noise.p_noise) {
      // Uniform over the other labels.
      const size_t pos = static_cast<size_t>(std::find(vocab.begin(), vocab.end(), label) - vocab.begin());
      size_t k = static_cast<size_t>(hash_uniform(seed, px * 2 + 1) * static_cast<double>(vocab.size() - 1));
      k = std::min(k, vocab.size() - 2);
      const LabelId other = vocab[k < pos ? k : k + 1];
      label = other;
    }
    seg.labels[px] = (label < keep.size() && keep[label]) ? label : kIgnoredId;
  }
  return seg;
}

void save_observation_pngs(const Observation& obs, const std::filesystem::path& dir,
                           const std::string& stem) {
  std::filesystem::create_directories(dir);
  write_png_rgb8(dir / (stem + "_color.png"), obs.width, obs.height, obs.color);
  std::vector<uint16_t> mm(obs.pixel_count());
  for (size_t px = 0; px < mm.size(); ++px)
    mm[px] = static_cast<uint16_t>(std::min(65535.0, std::round(obs.depth[px] * 1000.0)));
  write_png_gray16(dir / (stem + "_depth.png"), obs.width, obs.height, mm);
  write_png_gray16(dir / (stem + "_ids.png"), obs.width, obs.height, obs.semantic_ids);
}

Pose target_view_pose(const world::Scene& scene, const world::SceneObject& object,
                      const CameraModel& camera) {
  const Vec3 c = object.box.center();
  const Vec3 e = object.box.extent();
  const double standoff = 0.5 * std::max(e.x, e.y) + 8.0;
  const world::CollisionModel collision;
  Pose best;
  long best_count = -1;
  for (int h = 0; h < 8; ++h) {
    const double yaw = 45.0 * h;
    const double a = deg_to_rad(yaw);
    // Stand on the side facing `yaw` and look back at the object.
    Vec3 p{c.x + standoff * std::cos(a), c.y + standoff * std::sin(a),
           std::max(c.z, scene.ground_height + 2.0)};
    if (!collision.position_free(scene, p)) continue;
    const Vec3 to = c - p;
    Pose pose{p, std::fmod(rad_to_deg(std::atan2(to.y, to.x)) + 360.0, 360.0),
              std::clamp(rad_to_deg(std::atan2(to.z, std::hypot(to.x, to.y))), -90.0, 90.0)};
    if (pose.yaw_deg >= 360.0) pose.yaw_deg = 0.0;
    const Observation obs = render(scene, pose, camera);
    const long count = std::count(obs.semantic_ids.begin(), obs.semantic_ids.end(),
                                  static_cast<uint16_t>(object.object_id));
    if (count > best_count) {
      best_count = count;
      best = pose;
    }
  }
  if (best_count <= 0)
    throw Error("no clear view of object " + std::to_string(object.object_id));
  return best;
}

void save_target_image(const world::Scene& scene, const world::SceneObject& object,
                       const CameraModel& camera, const std::filesystem::path& path) {
  const Observation obs = render(scene, target_view_pose(scene, object, camera), camera);
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  write_png_rgb8(path, obs.width, obs.height, obs.color);
}

}  // namespace avos::sensor
