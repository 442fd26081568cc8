#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "avos/mapping/cognitive_map.hpp"
#include "avos/oracle/identification.hpp"
#include "avos/planner/plan_request.hpp"

namespace avos::oracle {

/// What the model is shown about the target: image reference I and text T.
/// The category is the simulator's stand-in for reading I and T.
struct TaskCue {
  std::string image_ref;
  std::string text;
  std::string category;
};

TaskCue cue_of(const world::Task& task);

struct DecideContext {
  const sensor::Observation* observation = nullptr;
  int target_object_id = 0;  // ground truth for the identification rule
  sensor::Pose pose;
  std::vector<planner::Action> feasible;  // enum order, includes Stop
  uint64_t seed = 0;                      // per-step draw seed
  std::string image_path;                 // optional color image on disk
};

struct Decision {
  planner::Action action = planner::Action::Stop;
  bool found_target = false;
  std::string rationale;
  bool fallback = false;  // remote output rejected, scripted policy used
  nlohmann::json exchange;
};

class Oracle {
 public:
  virtual ~Oracle() = default;
  virtual std::string mode() const = 0;
  /// E_s; always contains the target's own category.
  virtual std::set<std::string> related_semantics(const TaskCue& cue) = 0;
  /// A(s) for each label; labels outside E_s score 0.
  virtual mapping::AttractionTable attraction_scores(const TaskCue& cue,
                                                     const std::set<std::string>& labels) = 0;
  virtual Decision decide(const planner::PlanRequest& request, const DecideContext& ctx) = 0;
};

/// category -> related labels with attraction scores in [0, 1].
class KnowledgeBase {
 public:
  using Entry = std::vector<std::pair<std::string, double>>;

  static KnowledgeBase defaults();

  void add(const std::string& category, Entry entry);
  /// The entry for `category`, or {category: 1.0} when unknown.
  Entry lookup(const std::string& category) const;
  const std::map<std::string, Entry>& entries() const { return entries_; }

 private:
  std::map<std::string, Entry> entries_;
};

struct ScriptedParams {
  IdentificationRule identification;
  // Follow exploitation with probability equal to the cluster attraction when
  // exploration advice is also present.
  bool attraction_as_probability = true;
  double fbe_vertical_prob = 0.1;
  double stall_escape_prob = 0.5;  // random translation when no move nears p_m
  planner::ActionParams actions;
};

class ScriptedOracle : public Oracle {
 public:
  explicit ScriptedOracle(KnowledgeBase kb = KnowledgeBase::defaults(), ScriptedParams params = {});

  std::string mode() const override { return "scripted"; }
  std::set<std::string> related_semantics(const TaskCue& cue) override;
  mapping::AttractionTable attraction_scores(const TaskCue& cue,
                                             const std::set<std::string>& labels) override;
  Decision decide(const planner::PlanRequest& request, const DecideContext& ctx) override;

  const ScriptedParams& params() const { return params_; }

 private:
  KnowledgeBase kb_;
  ScriptedParams params_;
};

/// Greedy step toward `target`: the feasible non-Stop action whose end
/// position is nearest, ties to the smaller heading error, then enum order.
/// nullopt when no action reduces the distance.
std::optional<planner::Action> greedy_step(const sensor::Pose& pose, Vec3 target,
                                           const std::vector<planner::Action>& feasible,
                                           const planner::ActionParams& params);

/// Absolute yaw error in degrees between the pose heading and the horizontal
/// bearing to `target`.
double heading_error_deg(const sensor::Pose& pose, Vec3 target);

struct RemoteConfig {
  std::string endpoint;  // http(s)://host[:port]/path
  std::string key;
  std::string model = "gpt-4o";
  int timeout_ms = 30000;
  int attempts = 3;
  int backoff_ms = 500;  // doubled after each failed attempt
};

/// Chat-completion client. Replies must carry a fenced JSON block; anything
/// that fails validation falls back to the scripted oracle. Transport failure
/// after all attempts raises OracleFailure.
class RemoteOracle : public Oracle {
 public:
  RemoteOracle(RemoteConfig config, std::unique_ptr<ScriptedOracle> fallback);

  std::string mode() const override { return "remote"; }
  std::set<std::string> related_semantics(const TaskCue& cue) override;
  mapping::AttractionTable attraction_scores(const TaskCue& cue,
                                             const std::set<std::string>& labels) override;
  Decision decide(const planner::PlanRequest& request, const DecideContext& ctx) override;

  const std::vector<std::string>& warnings() const { return warnings_; }
  const std::vector<nlohmann::json>& exchanges() const { return exchanges_; }

 private:
  std::string complete(const std::string& prompt);

  RemoteConfig config_;
  std::unique_ptr<ScriptedOracle> fallback_;
  std::vector<std::string> warnings_;
  std::vector<nlohmann::json> exchanges_;
};

/// Extracts the first ```json fenced block (or bare ``` block) and parses it.
std::optional<nlohmann::json> extract_fenced_json(const std::string& text);

std::string related_prompt(const TaskCue& cue);
std::string attraction_prompt(const TaskCue& cue, const std::set<std::string>& labels);
std::string plan_prompt(const planner::PlanRequest& request, const DecideContext& ctx);

/// ORACLE_MODE, ORACLE_ENDPOINT, ORACLE_KEY, ORACLE_TIMEOUT_MS.
std::unique_ptr<Oracle> make_oracle(const std::string& mode, const ScriptedParams& params = {});
RemoteConfig remote_config_from_env();

}  // namespace avos::oracle
