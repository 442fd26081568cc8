#include "avos/world/scene.hpp"

#include <set>

namespace avos::world {

const SceneObject* Scene::find(int object_id) const {
  for (const auto& o : objects)
    if (o.object_id == object_id) return &o;
  return nullptr;
}

std::string_view to_string(Difficulty d) {
  switch (d) {
    case Difficulty::Easy:
      return "easy";
    case Difficulty::Medium:
      return "medium";
    case Difficulty::Hard:
      return "hard";
  }
  return "easy";
}

Difficulty difficulty_from_string(std::string_view s) {
  if (s == "easy") return Difficulty::Easy;
  if (s == "medium") return Difficulty::Medium;
  if (s == "hard") return Difficulty::Hard;
  throw ParseError("unknown difficulty '" + std::string(s) + "'");
}

bool is_unique_target(const Scene& scene, const SceneObject& target) {
  for (const auto& o : scene.objects) {
    if (o.object_id == target.object_id) continue;
    if (o.label == target.label && o.instance_text == target.instance_text) return false;
  }
  return true;
}

bool CollisionModel::position_free(const Scene& scene, Vec3 p) const {
  const Aabb inner = scene.bounds.inflated(-margin);
  if (!inner.contains(p)) return false;
  for (const auto& o : scene.objects)
    if (o.box.inflated(margin).strictly_contains(p)) return false;
  return true;
}

bool CollisionModel::segment_free(const Scene& scene, Vec3 a, Vec3 b) const {
  if (!position_free(scene, a) || !position_free(scene, b)) return false;
  for (const auto& o : scene.objects)
    if (segment_crosses_interior(a, b, o.box.inflated(margin))) return false;
  return true;
}

namespace {

std::string vec_path(const std::string& base, const char* field) { return base + "." + field; }

bool finite(Vec3 v) { return std::isfinite(v.x) && std::isfinite(v.y) && std::isfinite(v.z); }

}  // namespace

std::vector<Violation> validate_scene(const Scene& scene) {
  std::vector<Violation> out;
  if (scene.scene_id.empty()) out.push_back({"scene_id", "must be non-empty"});
  if (!finite(scene.bounds.min) || !finite(scene.bounds.max) || !scene.bounds.valid())
    out.push_back({"bounds", "must span positive volume on every axis"});
  if (!std::isfinite(scene.ground_height)) out.push_back({"ground_height", "must be finite"});
  std::set<int> ids;
  for (size_t n = 0; n < scene.objects.size(); ++n) {
    const auto& o = scene.objects[n];
    const std::string base = "objects[" + std::to_string(n) + "]";
    if (o.object_id <= 0 || o.object_id > 65535)
      out.push_back({vec_path(base, "object_id"), "must be in [1, 65535]"});
    if (!ids.insert(o.object_id).second)
      out.push_back({vec_path(base, "object_id"), "duplicate id " + std::to_string(o.object_id)});
    if (o.label.empty()) out.push_back({vec_path(base, "label"), "must be non-empty"});
    if (!finite(o.box.min) || !finite(o.box.max) || !o.box.valid())
      out.push_back({vec_path(base, "box_min"), "box_min must be < box_max componentwise"});
    else if (scene.bounds.valid() && !scene.bounds.contains(o.box))
      out.push_back({vec_path(base, "box_max"), "object must lie inside scene bounds"});
  }
  return out;
}

std::vector<Violation> validate_task(const Task& task, const Scene& scene,
                                     const DifficultyRule& rule,
                                     const CollisionModel& collision) {
  std::vector<Violation> out;
  if (task.id.empty()) out.push_back({"id", "must be non-empty"});
  if (task.scene_id != scene.scene_id)
    out.push_back({"e", "scene id '" + task.scene_id + "' does not match '" + scene.scene_id + "'"});
  if (!finite(task.target_position) || !scene.bounds.contains(task.target_position))
    out.push_back({"P_object", "target position must lie inside the scene bounds"});
  const SceneObject* target = scene.find(task.target_object_id);
  if (!target) {
    out.push_back({"target_object_id", "no such object in scene"});
  } else {
    if (!target->box.contains(task.target_position))
      out.push_back({"P_object", "target position must lie inside the target box"});
    if (task.target_label != target->label)
      out.push_back({"target_label", "does not match the target object's label"});
    const auto expected = rule.classify(scene.footprint_area(), is_unique_target(scene, *target));
    if (!expected || *expected != task.difficulty)
      out.push_back({"H", "difficulty inconsistent with scene size and target uniqueness"});
  }
  const auto& p0 = task.initial_pose;
  if (!finite(p0.position) || !scene.bounds.contains(p0.position))
    out.push_back({"P0.position", "initial pose must lie inside the scene bounds"});
  else if (!collision.position_free(scene, p0.position))
    out.push_back({"P0.position", "initial pose collides with the scene"});
  if (!(p0.yaw_deg >= 0.0 && p0.yaw_deg < 360.0))
    out.push_back({"P0.yaw_deg", "must be in [0, 360)"});
  if (!(p0.pitch_deg >= -90.0 && p0.pitch_deg <= 90.0))
    out.push_back({"P0.pitch_deg", "must be in [-90, 90]"});
  return out;
}

}  // namespace avos::world
