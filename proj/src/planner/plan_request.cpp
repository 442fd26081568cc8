#include "avos/planner/plan_request.hpp"

#include "avos/world/io.hpp"

namespace avos::planner {

using nlohmann::json;

PlanRequest assemble_plan_request(const world::Task& task, const ObservationSummary& obs,
                                  const std::optional<ExploitationAdvice>& exploit,
                                  const std::optional<ExplorationAdvice>& explore, double theta,
                                  const std::vector<Action>& history) {
  if (!(theta >= 0.0 && theta <= 1.0)) throw Error("theta must be in [0, 1]");
  PlanRequest r;
  r.task_id = task.id;
  r.image_ref = task.image_ref;
  r.text = task.text;
  r.observation = obs;
  r.exploitation = exploit;
  r.theta = theta;
  if (explore) {
    r.candidate_normalized = explore->normalized;
    r.candidate_raw = explore->raw;
    if (explore->normalized > theta) r.exploration = explore;
  }
  const size_t from = history.size() > kHistoryLength ? history.size() - kHistoryLength : 0;
  r.history.assign(history.begin() + static_cast<std::ptrdiff_t>(from), history.end());
  return r;
}

json PlanRequest::to_json() const {
  json j;
  j["schema"] = "plan_request";
  j["schema_version"] = kPlanSchemaVersion;
  j["task"] = {{"id", task_id}, {"image", image_ref}, {"text", text}};
  json labels = json::object();
  for (const auto& [k, v] : observation.labels) labels[k] = v;
  j["observation"] = {{"step", observation.step},
                      {"pose", world::pose_to_json(observation.pose)},
                      {"labels", labels},
                      {"mean_uncertainty", observation.mean_uncertainty}};
  if (exploitation) {
    const auto& e = *exploitation;
    j["exploitation"] = {{"target", json::array({e.target.x, e.target.y, e.target.z})},
                         {"attraction", e.attraction},
                         {"cluster_size", e.cluster_size}};
  } else {
    j["exploitation"] = nullptr;
  }
  if (exploration) {
    j["exploration"] = {{"action", std::string(to_string(exploration->action))},
                        {"reward", exploration->raw},
                        {"normalized_reward", exploration->normalized}};
  } else {
    j["exploration"] = nullptr;
  }
  j["gate"] = {{"theta", theta},
               {"candidate_normalized", candidate_normalized ? json(*candidate_normalized) : json()},
               {"candidate_raw", candidate_raw ? json(*candidate_raw) : json()},
               {"open", exploration.has_value()}};
  json hist = json::array();
  for (Action a : history) hist.push_back(std::string(to_string(a)));
  j["history"] = hist;
  return j;
}

}  // namespace avos::planner
