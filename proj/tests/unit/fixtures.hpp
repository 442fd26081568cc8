#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "avos/core/labels.hpp"
#include "avos/core/rng.hpp"
#include "avos/core/voxel_grid.hpp"
#include "avos/sensor/render.hpp"
#include "avos/world/scene.hpp"

namespace fixtures {

using avos::Aabb;
using avos::Vec3;

inline avos::world::SceneObject object(int id, std::string label, Vec3 lo, Vec3 hi,
                                       std::string text = "") {
  avos::world::SceneObject o;
  o.object_id = id;
  o.label = std::move(label);
  o.instance_text = text.empty() ? o.label + " " + std::to_string(id) : std::move(text);
  o.box = {lo, hi};
  return o;
}

inline avos::world::Scene scene(std::vector<avos::world::SceneObject> objects,
                                Aabb bounds = {{0, 0, 0}, {80, 80, 30}}, std::string id = "fixture") {
  avos::world::Scene s;
  s.scene_id = std::move(id);
  s.bounds = bounds;
  s.objects = std::move(objects);
  return s;
}

// Random non-overlapping boxes resting on the ground, with labels cycling
// through `labels`.
inline avos::world::Scene random_boxes(uint64_t seed, int count, Aabb bounds,
                                       const std::vector<std::string>& labels,
                                       double max_size = 8.0) {
  avos::Rng rng(seed);
  std::vector<avos::world::SceneObject> objs;
  int tries = 0;
  while (static_cast<int>(objs.size()) < count && tries++ < 10000) {
    const Vec3 size{rng.uniform(1.0, max_size), rng.uniform(1.0, max_size), rng.uniform(1.0, max_size)};
    const Vec3 lo{rng.uniform(bounds.min.x, bounds.max.x - size.x),
                  rng.uniform(bounds.min.y, bounds.max.y - size.y),
                  rng.uniform(bounds.min.z, bounds.max.z * 0.5)};
    const Aabb box{lo, lo + size};
    bool clear = true;
    for (const auto& o : objs)
      if (o.box.inflated(0.5).overlaps_interior(box)) clear = false;
    if (!clear) continue;
    const int id = static_cast<int>(objs.size()) + 1;
    objs.push_back(object(id, labels[objs.size() % labels.size()], box.min, box.max));
  }
  return scene(std::move(objs), bounds, "random_" + std::to_string(seed));
}

// A pose in free space (not inside any box inflated by 1 m).
inline avos::sensor::Pose free_pose(const avos::world::Scene& s, avos::Rng& rng) {
  const avos::world::CollisionModel collision;
  for (;;) {
    const Vec3 p{rng.uniform(s.bounds.min.x + 1.5, s.bounds.max.x - 1.5),
                 rng.uniform(s.bounds.min.y + 1.5, s.bounds.max.y - 1.5),
                 rng.uniform(s.bounds.min.z + 1.5, s.bounds.max.z - 1.5)};
    if (!collision.position_free(s, p)) continue;
    return {p, rng.uniform(0.0, 360.0), rng.uniform(-45.0, 20.0)};
  }
}

inline std::filesystem::path temp_dir(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / ("avos_test_" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

// A narrow camera whose pixels all land in the same cell of a 2 m grid
// anchored at the origin: n pixels looking along +x from (1, 5, 5) with a
// hit 10 m out, inside cell (5, 2, 2).
struct Burst {
  avos::sensor::CameraModel cam;
  avos::sensor::Observation obs;
  avos::sensor::SegmentedImage seg;
};

inline Burst burst(const std::vector<avos::LabelId>& labels) {
  Burst b;
  const int n = static_cast<int>(labels.size());
  b.cam = avos::sensor::CameraModel::from_fov(n, 1, 0.001, 60.0);
  b.obs.width = n;
  b.obs.height = 1;
  b.obs.pose = avos::sensor::Pose{{1, 5, 5}, 0, 0};
  b.obs.depth.assign(static_cast<size_t>(n), 10.0);
  b.obs.semantic_ids.assign(static_cast<size_t>(n), 1);
  b.obs.color.assign(static_cast<size_t>(n) * 3, 0);
  b.seg.width = n;
  b.seg.height = 1;
  b.seg.labels = labels;
  b.seg.object_ids = b.obs.semantic_ids;
  return b;
}

inline const avos::CellIndex kBurstCell{5, 2, 2};

}  // namespace fixtures
