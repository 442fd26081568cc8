#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "avos/world/scene.hpp"

namespace avos::world {

/// Object categories the generator knows about. Targets are drawn from the
/// five non-building categories; trees are context only.
inline const std::vector<std::string>& generator_categories() {
  static const std::vector<std::string> cats{"building", "shop",    "tree",    "sign",
                                             "vehicle",  "billboard", "facility"};
  return cats;
}
inline const std::vector<std::string>& target_categories() {
  static const std::vector<std::string> cats{"shop", "sign", "billboard", "vehicle", "facility"};
  return cats;
}

struct SceneParams {
  std::string scene_id = "scene";
  double area = 10000.0;  // m^2, must lie in [min_area, max_area]
  double aspect = 1.0;    // x extent / y extent
  double height = 40.0;   // m
  int buildings = 4;
  int shops = 6;
  int trees = 8;
  int signs = 4;
  int vehicles = 4;
  int billboards = 1;
  int facilities = 2;
  // Extra objects copying the label and text of an existing target-category
  // object, producing non-unique targets.
  int duplicates = 0;

  static constexpr double min_area = 5600.0;
  static constexpr double max_area = 82800.0;

  /// Object counts scaled to the footprint.
  static SceneParams for_area(std::string scene_id, double area, int duplicates = 0);
};

/// Deterministic box-world city. Throws GenerationError when the requested
/// objects cannot be placed without overlap.
Scene generate_scene(uint64_t seed, const SceneParams& params);

struct TaskParams {
  double min_start_distance = 30.0;  // horizontal, m
  double max_start_distance = 90.0;
  std::vector<double> start_altitudes{8.5, 13.5, 18.5};
  double start_pitch_deg = -15.0;
  int max_tasks = -1;  // <0: one task per eligible target
};

/// One task per eligible target object. Targets whose difficulty is undefined
/// (non-unique in a small scene) and targets without a collision-free start
/// are skipped. An empty scene yields no tasks.
std::vector<Task> derive_tasks(const Scene& scene, uint64_t seed, const TaskParams& params = {},
                               const DifficultyRule& rule = {});

std::string describe_target(const SceneObject& object);

struct Benchmark {
  std::vector<Scene> scenes;
  std::vector<Task> tasks;
};

struct BenchmarkParams {
  int per_difficulty = 20;
  int max_tasks_per_scene = 2;
  double small_area_min = 6000.0;
  double small_area_max = 16000.0;
  double large_area_min = 22000.0;
  double large_area_max = 40000.0;
  TaskParams small_tasks{30.0, 80.0, {8.5, 13.5, 18.5}, -15.0, -1};
  TaskParams large_tasks{50.0, 120.0, {8.5, 13.5, 18.5}, -15.0, -1};
};

/// Scenes and tasks with exactly `per_difficulty` tasks of each class.
Benchmark build_benchmark(uint64_t seed, const BenchmarkParams& params = {});

}  // namespace avos::world
