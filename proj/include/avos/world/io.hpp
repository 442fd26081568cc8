#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "avos/world/scene.hpp"

namespace avos::world {

inline constexpr int kSceneFormatVersion = 1;
inline constexpr int kTaskFormatVersion = 1;

nlohmann::json scene_to_json(const Scene& scene);
/// Throws ParseError on structural problems and ValidationError when the
/// scene breaks an invariant.
Scene scene_from_json(const nlohmann::json& doc);

nlohmann::json pose_to_json(const sensor::Pose& pose);
sensor::Pose pose_from_json(const nlohmann::json& doc, const std::string& path);

nlohmann::json task_to_json(const Task& task);
Task task_from_json(const nlohmann::json& doc, const std::string& path = "task");

/// Serialized text is deterministic: identical scenes give identical bytes.
std::string dump_scene(const Scene& scene);
void save_scene(const Scene& scene, const std::filesystem::path& path);
Scene load_scene(const std::filesystem::path& path);
Scene parse_scene(const std::string& text);

/// A task file lists tasks plus the scene files they reference (paths
/// relative to the task file).
struct TaskFile {
  std::vector<Task> tasks;
  std::map<std::string, std::string> scene_files;  // scene_id -> relative path
};

void save_tasks(const TaskFile& file, const std::filesystem::path& path);
TaskFile load_tasks(const std::filesystem::path& path);

/// Loads a task file with all referenced scenes and validates every task.
struct Suite {
  std::vector<Task> tasks;
  std::map<std::string, Scene> scenes;
  const Scene& scene_for(const Task& t) const;
  const Task& task(const std::string& id) const;
};
Suite load_suite(const std::filesystem::path& tasks_path);

}  // namespace avos::world
