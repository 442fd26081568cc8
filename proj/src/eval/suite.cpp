#include "avos/eval/suite.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <map>

#include "avos/core/rng.hpp"
#include "avos/sensor/render.hpp"

namespace avos::eval {

std::string record_filename(int index, const std::string& task_id) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "%04d_", index);
  return buf + task_id + ".jsonl";
}

SuiteRun run_suite(const world::Suite& suite, const SuiteRunOptions& options) {
  if (suite.tasks.empty()) throw Error("suite has no tasks");
  options.base.validate();
  const int n = options.episodes < 0 ? static_cast<int>(suite.tasks.size()) : options.episodes;
  SuiteRun run;
  run.records.resize(n);
  std::vector<std::string> errors(n);

#pragma omp parallel for schedule(dynamic, 1)
  for (int i = 0; i < n; ++i) {
    const world::Task& task = suite.tasks[static_cast<size_t>(i) % suite.tasks.size()];
    agent::EpisodeConfig config = options.base;
    config.task_id = task.id;
    config.seed = mix_seed(options.seed, static_cast<uint64_t>(i));
    try {
      run.records[i] = agent::run_episode(config, suite.scene_for(task), task);
    } catch (const std::exception& e) {
      errors[i] = task.id + ": " + e.what();
    }
  }

  std::vector<agent::EpisodeRecord> ok;
  std::map<std::string, world::Task> tasks;
  for (const auto& t : suite.tasks) tasks.emplace(t.id, t);
  for (int i = 0; i < n; ++i) {
    if (!errors[i].empty()) {
      run.errors.push_back(errors[i]);
      continue;
    }
    ok.push_back(run.records[i]);
  }
  if (!ok.empty()) run.result = metrics(ok, tasks);

  if (!options.out.empty()) {
    const auto dir = options.out / "records";
    std::filesystem::create_directories(dir);
    for (int i = 0; i < n; ++i)
      if (errors[i].empty())
        run.records[i].save(dir / record_filename(i, run.records[i].task_id));
    std::ofstream f(options.out / "suite_result.json", std::ios::binary);
    f << to_json(run.result).dump(2) << "\n";
    if (!f) throw Error("cannot write " + (options.out / "suite_result.json").string());
  }
  return run;
}

std::vector<agent::EpisodeRecord> load_records(const std::filesystem::path& dir) {
  if (!std::filesystem::is_directory(dir)) throw Error("not a directory: " + dir.string());
  std::vector<std::filesystem::path> files;
  for (const auto& e : std::filesystem::recursive_directory_iterator(dir))
    if (e.is_regular_file() && e.path().extension() == ".jsonl") files.push_back(e.path());
  std::sort(files.begin(), files.end());
  std::vector<agent::EpisodeRecord> out;
  out.reserve(files.size());
  for (const auto& f : files) out.push_back(agent::EpisodeRecord::load(f));
  return out;
}

void write_benchmark(const world::Benchmark& bench, const std::filesystem::path& dir,
                     const sensor::CameraModel& image_camera) {
  std::filesystem::create_directories(dir / "scenes");
  world::TaskFile file;
  std::map<std::string, const world::Scene*> scenes;
  for (const auto& s : bench.scenes) {
    const std::string rel = "scenes/" + s.scene_id + ".json";
    world::save_scene(s, dir / rel);
    file.scene_files[s.scene_id] = rel;
    scenes[s.scene_id] = &s;
  }
  for (const auto& t : bench.tasks) {
    const world::Scene& scene = *scenes.at(t.scene_id);
    sensor::save_target_image(scene, *scene.find(t.target_object_id), image_camera,
                              dir / t.image_ref);
    file.tasks.push_back(t);
  }
  world::save_tasks(file, dir / "tasks.json");
}

}  // namespace avos::eval
