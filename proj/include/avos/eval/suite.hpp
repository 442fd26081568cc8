#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "avos/agent/episode.hpp"
#include "avos/eval/metrics.hpp"
#include "avos/world/generator.hpp"
#include "avos/world/io.hpp"

namespace avos::eval {

struct SuiteRunOptions {
  agent::EpisodeConfig base;  // task_id and seed are filled per episode
  int episodes = -1;          // <0: one episode per task
  uint64_t seed = 0;
  std::filesystem::path out;  // empty: keep everything in memory
};

struct SuiteRun {
  std::vector<agent::EpisodeRecord> records;  // episode order
  std::vector<std::string> errors;            // episodes that threw
  SuiteResult result;
};

/// Episode i runs task i mod |tasks| with seed mix_seed(seed, i). Episodes
/// run concurrently; records and the aggregated result do not depend on the
/// thread count. With `out` set, writes records/NNNN_<task>.jsonl and
/// suite_result.json.
SuiteRun run_suite(const world::Suite& suite, const SuiteRunOptions& options);

std::string record_filename(int index, const std::string& task_id);

/// Reads every *.jsonl under `dir` (sorted by name).
std::vector<agent::EpisodeRecord> load_records(const std::filesystem::path& dir);

/// scenes/<id>.json, images/<task>.png and tasks.json under `dir`.
void write_benchmark(const world::Benchmark& bench, const std::filesystem::path& dir,
                     const sensor::CameraModel& image_camera);

}  // namespace avos::eval
