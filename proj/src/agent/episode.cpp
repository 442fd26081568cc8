#include "avos/agent/episode.hpp"

#include <algorithm>

#include "avos/agent/baselines.hpp"
#include "avos/mapping/occupancy.hpp"
#include "avos/planner/exploitation.hpp"
#include "avos/planner/exploration.hpp"
#include "avos/planner/plan_request.hpp"

namespace avos::agent {

using planner::Action;

Episode::Episode(EpisodeConfig config, const world::Scene& scene, const world::Task& task,
                 oracle::Oracle* oracle)
    : config_(std::move(config)),
      scene_(&scene),
      task_(task),
      oracle_(oracle),
      pose_(task.initial_pose),
      rng_(mix_seed(config_.seed, 0x4e5a)) {
  config_.validate();
  if (task.scene_id != scene.scene_id)
    throw ValidationError({{"e", "task scene '" + task.scene_id + "' is not '" + scene.scene_id + "'"}});
  if (config_.agent == AgentKind::PRPSearcher && !oracle_)
    throw Error("PRPSearcher episodes need an oracle");

  record_.config = config_;
  record_.task_id = task.id;
  record_.scene_id = scene.scene_id;
  record_.difficulty = std::string(world::to_string(task.difficulty));
  record_.final_pose = pose_;

  if (config_.agent == AgentKind::PRPSearcher || config_.agent == AgentKind::Human) {
    // Human sessions get maps for the overlays, seeded from the knowledge base.
    oracle::ScriptedOracle local;
    oracle::Oracle* semantics = oracle_ ? oracle_ : &local;
    const auto cue = oracle::cue_of(task);
    try {
      related_ = semantics->related_semantics(cue);
      table_ = semantics->attraction_scores(cue, related_);
    } catch (const OracleFailure& e) {
      render_current();
      finish(Termination::OracleFailure, e.what());
      return;
    }
    record_.related.assign(related_.begin(), related_.end());
    record_.attraction = table_.to_json();
    const GridSpec spec = GridSpec::make(scene.bounds, config_.cell_size);
    semantic_ = std::make_unique<mapping::SemanticVoxelGrid>(spec, config_.cumulative_counts);
    cognitive_ = std::make_unique<mapping::CognitiveGrid>(spec);
    uncertainty_ = std::make_unique<mapping::UncertaintyGrid>(spec, config_.alpha);
    if (config_.ground_truth_occlusion) gt_occupancy_ = mapping::scene_occupancy(scene, spec);
  }
  render_current();
}

const mapping::SemanticVoxelGrid& Episode::semantic() const {
  if (!semantic_) throw Error("episode has no maps");
  return *semantic_;
}
const mapping::CognitiveGrid& Episode::cognitive() const {
  if (!cognitive_) throw Error("episode has no maps");
  return *cognitive_;
}
const mapping::UncertaintyGrid& Episode::uncertainty() const {
  if (!uncertainty_) throw Error("episode has no maps");
  return *uncertainty_;
}
const std::vector<uint8_t>& Episode::occupancy() const {
  return config_.ground_truth_occlusion ? gt_occupancy_ : semantic().occupancy();
}

std::vector<Action> Episode::feasible() const {
  return planner::feasible_actions(*scene_, pose_, config_.actions);
}

void Episode::render_current() {
  obs_ = sensor::render(*scene_, pose_, config_.camera, record_.ss);
  perceived_ = false;
}

void Episode::perceive() {
  if (!semantic_ || perceived_) return;
  const sensor::NoiseConfig noise{config_.p_noise, mix_seed(config_.seed, 0x5e6)};
  const auto seg = sensor::segment(obs_, *scene_, related_, semantic_->label_index(), noise);
  const auto res = semantic_->integrate(seg, obs_, config_.camera);
  cognitive_->refresh(*semantic_, table_, res.touched);
  const auto& occ = occupancy();
  recognized_now_ = static_cast<int>(
      cognitive_->mark_recognized(occ, pose_, config_.camera, config_.actions.step_size).size());
  const auto vis = mapping::visible_cells(semantic_->spec(), occ, pose_, config_.camera);
  uncertainty_->attenuate(vis, pose_.position);
  perceived_ = true;
}

void Episode::finish(Termination t, const std::string& error) {
  record_.termination = t;
  record_.final_pose = pose_;
  record_.error = error;
}

void Episode::execute(Action a, bool found, StepEntry entry) {
  entry.step = record_.ss;
  entry.pose = pose_;
  entry.action = a;
  entry.found_target = a == Action::Stop && found;
  if (semantic_) {
    entry.semantic_digest = semantic_->digest();
    entry.cognitive_digest = cognitive_->digest();
    entry.uncertainty_digest = uncertainty_->digest();
    entry.mean_uncertainty = uncertainty_->mean();
    entry.recognized = recognized_now_;
  }
  if (a == Action::Stop) {
    entry.next_pose = pose_;
    record_.steps.push_back(std::move(entry));
    record_.ss += 1;
    record_.found_target = found;
    history_.push_back(a);
    finish(Termination::Stopped);
    return;
  }
  if (!planner::feasible(*scene_, pose_, a, config_.actions))
    throw InfeasibleActionError("action " + std::string(planner::to_string(a)) + " is infeasible");
  const sensor::Pose next = planner::apply(pose_, a, config_.actions);
  entry.next_pose = next;
  record_.tl += distance(pose_.position, next.position);
  record_.steps.push_back(std::move(entry));
  record_.ss += 1;
  history_.push_back(a);
  pose_ = next;
  record_.final_pose = pose_;
  if (record_.ss >= config_.max_steps) {
    finish(Termination::StepLimit);
    return;
  }
  render_current();
}

void Episode::step() {
  if (terminated()) throw Error("episode already terminated");
  const auto feas = feasible();
  const int target = task_.target_object_id;

  if (config_.agent == AgentKind::Human) throw Error("human sessions advance through act()");

  if (config_.agent == AgentKind::RE || config_.agent == AgentKind::FBE) {
    StepEntry e;
    if (oracle::identified(obs_, target, config_.identification)) {
      e.oracle = {{"policy", std::string(to_string(config_.agent))}, {"rationale", "target identified in view"}};
      execute(Action::Stop, true, std::move(e));
      return;
    }
    Action a;
    try {
      if (config_.agent == AgentKind::RE) {
        a = re_policy(rng_, feas);
      } else {
        FbeParams fp;
        fp.vertical_prob = config_.fbe_vertical_prob;
        a = fbe_policy(rng_, feas, fp);
      }
    } catch (const DeadEndError& err) {
      finish(Termination::DeadEnd, err.what());
      return;
    }
    e.oracle = {{"policy", std::string(to_string(config_.agent))}};
    execute(a, false, std::move(e));
    return;
  }

  // PRPSearcher.
  perceive();
  std::optional<planner::ExploitationAdvice> exploit;
  if (config_.use_exploitation)
    exploit = planner::exploitation_target(*cognitive_, pose_.position, config_.dbscan);
  std::optional<planner::ExplorationAdvice> explore;
  if (config_.use_exploration) {
    planner::MotionContext ctx{scene_, config_.camera, config_.actions, {}};
    try {
      explore = planner::best_exploration_action(*uncertainty_, occupancy(), ctx, pose_);
    } catch (const DeadEndError&) {
      explore.reset();
    }
  }
  planner::ObservationSummary summary;
  summary.step = record_.ss;
  summary.pose = pose_;
  summary.mean_uncertainty = uncertainty_->mean();
  {
    std::map<uint16_t, int> ids;
    for (size_t n = 0; n < obs_.pixel_count(); ++n)
      if (obs_.semantic_ids[n]) ++ids[obs_.semantic_ids[n]];
    for (const auto& [id, count] : ids)
      if (const auto* o = scene_->find(id); o && related_.count(o->label)) summary.labels[o->label] += count;
  }
  const auto request =
      planner::assemble_plan_request(task_, summary, exploit, explore, config_.theta, history_);

  oracle::DecideContext dctx;
  dctx.observation = &obs_;
  dctx.target_object_id = target;
  dctx.pose = pose_;
  dctx.feasible = feas;
  dctx.seed = mix_seed(config_.seed, 0x1000 + static_cast<uint64_t>(record_.ss));
  oracle::Decision decision;
  try {
    decision = oracle_->decide(request, dctx);
  } catch (const OracleFailure& err) {
    finish(Termination::OracleFailure, err.what());
    return;
  } catch (const DeadEndError& err) {
    finish(Termination::DeadEnd, err.what());
    return;
  }
  StepEntry e;
  e.plan_request = request.to_json();
  e.oracle = decision.exchange;
  e.exploration_included = request.exploration.has_value();
  if (e.exploration_included) ++record_.exploration_advice_count;
  execute(decision.action, decision.found_target, std::move(e));
}

const EpisodeRecord& Episode::run() {
  while (!terminated()) step();
  return record_;
}

void Episode::act(Action a) {
  if (terminated()) throw Error("episode already terminated");
  const auto feas = feasible();
  if (std::find(feas.begin(), feas.end(), a) == feas.end())
    throw InfeasibleActionError("action " + std::string(planner::to_string(a)) + " is infeasible");
  perceive();
  const bool found = a == Action::Stop &&
                     oracle::identified(obs_, task_.target_object_id, config_.identification);
  StepEntry e;
  e.oracle = {{"policy", "external"}};
  execute(a, found, std::move(e));
}

std::unique_ptr<oracle::Oracle> make_episode_oracle(const EpisodeConfig& config) {
  if (config.agent != AgentKind::PRPSearcher) return nullptr;
  oracle::ScriptedParams p;
  p.identification = config.identification;
  p.attraction_as_probability = config.attraction_as_probability;
  p.fbe_vertical_prob = config.fbe_vertical_prob;
  p.actions = config.actions;
  return oracle::make_oracle(config.oracle_mode, p);
}

EpisodeRecord run_episode(const EpisodeConfig& config, const world::Scene& scene,
                          const world::Task& task) {
  auto oracle = make_episode_oracle(config);
  Episode ep(config, scene, task, oracle.get());
  return ep.run();
}

}  // namespace avos::agent
