#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "avos/planner/exploitation.hpp"
#include "avos/planner/exploration.hpp"
#include "avos/world/scene.hpp"

namespace avos::planner {

inline constexpr int kPlanSchemaVersion = 1;
inline constexpr size_t kHistoryLength = 5;

struct ObservationSummary {
  int step = 0;
  sensor::Pose pose;
  std::map<std::string, int> labels;  // retained label -> pixel count
  double mean_uncertainty = 1.0;
};

struct PlanRequest {
  std::string task_id;
  std::string image_ref;  // I
  std::string text;       // T
  ObservationSummary observation;
  std::optional<ExploitationAdvice> exploitation;  // long-term guidance
  std::optional<ExplorationAdvice> exploration;    // present iff the gate is open
  double theta = 0.1;
  std::optional<double> candidate_normalized;  // a* score before gating
  std::optional<double> candidate_raw;
  std::vector<Action> history;  // most recent last

  nlohmann::json to_json() const;
};

/// Embeds exploration advice iff its normalized reward exceeds theta.
/// Throws Error when theta is outside [0, 1].
PlanRequest assemble_plan_request(const world::Task& task, const ObservationSummary& obs,
                                  const std::optional<ExploitationAdvice>& exploit,
                                  const std::optional<ExplorationAdvice>& explore, double theta,
                                  const std::vector<Action>& history);

}  // namespace avos::planner
