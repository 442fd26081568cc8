#pragma once

#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "avos/agent/episode.hpp"
#include "avos/world/scene.hpp"

namespace avos::eval {

inline constexpr double kSuccessThreshold = 20.0;  // m

/// fs = 1 iff the episode ended with Stop, the target was reported found and
/// the final position is within `threshold` of P_object.
bool success(const agent::EpisodeRecord& record, const world::Task& task,
             double threshold = kSuccessThreshold);

/// Straight-line distance from the start position to P_object (desk-scale
/// stand-in for the shortest path).
double shortest_path_length(const world::Task& task);

struct Outcome {
  std::string method;
  std::string task_id;
  std::string difficulty;
  bool fs = false;
  int ss = 0;
  double tl = 0.0;
  double tl_star = 0.0;
  double ne = 0.0;  // |fp - P_object|
  int n_theta = 0;  // steps with exploration advice in the request
};

Outcome outcome_of(const agent::EpisodeRecord& record, const world::Task& task,
                   double threshold = kSuccessThreshold);

struct MetricRow {
  int q = 0;
  double sr = 0.0;   // %
  double mss = 0.0;
  double spl = 0.0;  // %
  double ne = 0.0;   // m
  double n_theta = 0.0;

  friend bool operator==(const MetricRow&, const MetricRow&) = default;
};

/// SR = mean fs, MSS = mean ss, NE = mean |fp - P_object|,
/// SPL = mean fs * tl* / max(tl, tl*). Throws Error when empty.
MetricRow aggregate(const std::vector<Outcome>& outcomes);

struct MethodResult {
  std::string method;
  std::map<std::string, MetricRow> by_difficulty;  // easy / medium / hard
  MetricRow total;

  friend bool operator==(const MethodResult&, const MethodResult&) = default;
};

struct SuiteResult {
  std::vector<MethodResult> methods;  // sorted by method name

  const MethodResult& method(const std::string& name) const;
  friend bool operator==(const SuiteResult&, const SuiteResult&) = default;
};

/// Groups records by method and difficulty. Throws Error when a record's task
/// id is missing from `tasks` or there are no records.
SuiteResult metrics(const std::vector<agent::EpisodeRecord>& records,
                    const std::map<std::string, world::Task>& tasks,
                    double threshold = kSuccessThreshold);
SuiteResult metrics_from_outcomes(const std::vector<Outcome>& outcomes);

enum class ReportFormat { Text, Csv, Json };
ReportFormat report_format_from_string(const std::string& s);

/// Column order SR, MSS, SPL, NE (then the exploration-advice count NT).
std::string report(const SuiteResult& result, ReportFormat format);
SuiteResult parse_csv(const std::string& text);
nlohmann::json to_json(const SuiteResult& result);
SuiteResult from_json(const nlohmann::json& doc);

}  // namespace avos::eval
