#pragma once

#include <cstdint>
#include <filesystem>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "avos/core/rng.hpp"
#include "avos/mapping/cognitive_map.hpp"
#include "avos/mapping/semantic_map.hpp"
#include "avos/mapping/uncertainty_map.hpp"
#include "avos/oracle/oracle.hpp"
#include "avos/planner/dbscan.hpp"
#include "avos/sensor/render.hpp"
#include "avos/world/scene.hpp"

namespace avos::agent {

enum class AgentKind { PRPSearcher, RE, FBE, Human };
std::string_view to_string(AgentKind k);
AgentKind agent_kind_from_string(std::string_view s);

enum class Termination { Running, Stopped, StepLimit, DeadEnd, OracleFailure };
std::string_view to_string(Termination t);
Termination termination_from_string(std::string_view s);

struct EpisodeConfig {
  std::string task_id;
  AgentKind agent = AgentKind::PRPSearcher;
  std::string method;  // result-table row label; empty uses the agent name
  int max_steps = 100;
  double theta = 0.1;
  double alpha = 0.02;   // 1/m
  planner::ActionParams actions;
  uint64_t seed = 0;
  std::string oracle_mode = "scripted";
  sensor::CameraModel camera = sensor::CameraModel::from_fov(160, 120, 60.0, 60.0);
  double cell_size = 2.0;  // m
  planner::DbscanParams dbscan;
  double p_noise = 0.0;
  bool cumulative_counts = true;
  bool ground_truth_occlusion = false;
  bool use_exploration = true;
  bool use_exploitation = true;
  bool attraction_as_probability = true;
  oracle::IdentificationRule identification;
  double fbe_vertical_prob = 0.1;

  std::string method_name() const;
  /// Throws ValidationError listing every problem.
  void validate() const;
  nlohmann::json to_json() const;
  static EpisodeConfig from_json(const nlohmann::json& j);
};

struct StepEntry {
  int step = 0;
  sensor::Pose pose;       // before the action
  planner::Action action = planner::Action::Stop;
  sensor::Pose next_pose;  // after the action
  bool found_target = false;
  bool exploration_included = false;
  nlohmann::json plan_request;  // null for agents without maps
  nlohmann::json oracle;        // decision exchange
  uint64_t semantic_digest = 0;
  uint64_t cognitive_digest = 0;
  uint64_t uncertainty_digest = 0;
  double mean_uncertainty = 1.0;
  int recognized = 0;  // cells newly recognized this step
};

struct EpisodeRecord {
  EpisodeConfig config;
  std::string task_id;
  std::string scene_id;
  std::string difficulty;
  std::vector<std::string> related;
  nlohmann::json attraction = nlohmann::json::object();
  std::vector<StepEntry> steps;
  Termination termination = Termination::Running;
  bool found_target = false;
  sensor::Pose final_pose;
  int ss = 0;
  double tl = 0.0;
  int exploration_advice_count = 0;  // N_theta contribution
  std::string error;

  /// Header line, one line per step, footer line. Deterministic bytes.
  std::string to_jsonl() const;
  static EpisodeRecord from_jsonl(const std::string& text);
  void save(const std::filesystem::path& path) const;
  static EpisodeRecord load(const std::filesystem::path& path);
};

inline constexpr int kRecordFormatVersion = 1;

/// One episode's live state. Automated agents advance with step(); the
/// server drives human sessions through act().
class Episode {
 public:
  /// `oracle` may be null for RE, FBE and Human agents. Throws
  /// ValidationError for an invalid config or a task that does not belong to
  /// the scene.
  Episode(EpisodeConfig config, const world::Scene& scene, const world::Task& task,
          oracle::Oracle* oracle = nullptr);

  bool terminated() const { return record_.termination != Termination::Running; }
  const EpisodeRecord& record() const { return record_; }
  const sensor::Observation& observation() const { return obs_; }
  const sensor::Pose& pose() const { return pose_; }
  const EpisodeConfig& config() const { return config_; }
  std::vector<planner::Action> feasible() const;

  /// One automated decision and action.
  void step();
  /// Runs until termination.
  const EpisodeRecord& run();
  /// Applies an externally chosen action. Stop's found flag comes from the
  /// identification rule. Throws InfeasibleActionError or Error when
  /// terminated.
  void act(planner::Action a);

  bool has_maps() const { return semantic_ != nullptr; }
  const mapping::SemanticVoxelGrid& semantic() const;
  const mapping::CognitiveGrid& cognitive() const;
  const mapping::UncertaintyGrid& uncertainty() const;
  const std::vector<uint8_t>& occupancy() const;

  /// Integrates the current observation into the maps once per step.
  void perceive();

 private:
  void execute(planner::Action a, bool found, StepEntry entry);
  void render_current();
  void finish(Termination t, const std::string& error = {});

  EpisodeConfig config_;
  const world::Scene* scene_;
  world::Task task_;
  oracle::Oracle* oracle_;
  sensor::Pose pose_;
  sensor::Observation obs_;
  Rng rng_;
  EpisodeRecord record_;
  std::vector<planner::Action> history_;

  std::set<std::string> related_;
  mapping::AttractionTable table_;
  std::unique_ptr<mapping::SemanticVoxelGrid> semantic_;
  std::unique_ptr<mapping::CognitiveGrid> cognitive_;
  std::unique_ptr<mapping::UncertaintyGrid> uncertainty_;
  std::vector<uint8_t> gt_occupancy_;
  bool perceived_ = false;
  int recognized_now_ = 0;
};

/// Builds the oracle for a config (null for agents that do not use one).
std::unique_ptr<oracle::Oracle> make_episode_oracle(const EpisodeConfig& config);

/// Convenience wrapper: builds the oracle and runs to termination.
EpisodeRecord run_episode(const EpisodeConfig& config, const world::Scene& scene,
                          const world::Task& task);

}  // namespace avos::agent
