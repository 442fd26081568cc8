#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "avos/core/errors.hpp"
#include "avos/core/geometry.hpp"
#include "avos/sensor/camera.hpp"

namespace avos::world {

struct SceneObject {
  int object_id = 0;  // >= 1; 0 is reserved for "no hit" in id images
  std::string label;
  std::string instance_text;
  Aabb box;
  std::array<uint8_t, 3> display_color{128, 128, 128};

  friend bool operator==(const SceneObject&, const SceneObject&) = default;
};

struct Scene {
  std::string scene_id;
  Aabb bounds;
  double ground_height = 0.0;
  std::vector<SceneObject> objects;

  double footprint_area() const {
    const Vec3 e = bounds.extent();
    return e.x * e.y;
  }
  const SceneObject* find(int object_id) const;

  friend bool operator==(const Scene& a, const Scene& b) {
    return a.scene_id == b.scene_id && a.bounds.min == b.bounds.min &&
           a.bounds.max == b.bounds.max && a.ground_height == b.ground_height &&
           a.objects == b.objects;
  }
};

enum class Difficulty { Easy, Medium, Hard };

std::string_view to_string(Difficulty d);
Difficulty difficulty_from_string(std::string_view s);

/// Easy: small scene, unique target. Medium: large scene, unique target.
/// Hard: large scene, non-unique target. A non-unique target in a small scene
/// has no class.
struct DifficultyRule {
  double small_scene_max_area = 20000.0;  // m^2, exclusive

  bool is_small(double area) const { return area < small_scene_max_area; }
  std::optional<Difficulty> classify(double area, bool unique) const {
    const bool small = is_small(area);
    if (small && unique) return Difficulty::Easy;
    if (!small && unique) return Difficulty::Medium;
    if (!small && !unique) return Difficulty::Hard;
    return std::nullopt;
  }
};

/// True when no other object shares the target's label and instance text.
bool is_unique_target(const Scene& scene, const SceneObject& target);

/// Search task G = (id, e, H, I, T, P_object, P0). The target object id and
/// label are simulator ground truth used by the scripted oracle and checks.
struct Task {
  std::string id;
  std::string scene_id;                 // e
  Difficulty difficulty = Difficulty::Easy;  // H
  std::string image_ref;                // I
  std::string text;                     // T
  Vec3 target_position;                 // P_object
  sensor::Pose initial_pose;            // P0
  int target_object_id = 0;
  std::string target_label;

  friend bool operator==(const Task&, const Task&) = default;
};

/// Collision model shared by task validation and the action space: a point
/// collides when it enters any object box inflated by `margin`, or leaves the
/// scene bounds shrunk by the same margin.
struct CollisionModel {
  double margin = 1.0;

  bool position_free(const Scene& scene, Vec3 p) const;
  bool segment_free(const Scene& scene, Vec3 a, Vec3 b) const;
};

std::vector<Violation> validate_scene(const Scene& scene);
std::vector<Violation> validate_task(const Task& task, const Scene& scene,
                                     const DifficultyRule& rule = {},
                                     const CollisionModel& collision = {});

}  // namespace avos::world
