#include <algorithm>
#include <cmath>
#include <sstream>

#include "avos/agent/baselines.hpp"
#include "avos/oracle/oracle.hpp"

namespace avos::oracle {

using planner::Action;

TaskCue cue_of(const world::Task& task) { return {task.image_ref, task.text, task.target_label}; }

KnowledgeBase KnowledgeBase::defaults() {
  KnowledgeBase kb;
  kb.add("shop", {{"shop", 1.0}, {"tree", 0.95}, {"sign", 0.9}, {"building", 0.4}});
  kb.add("sign", {{"sign", 1.0}, {"shop", 0.8}, {"building", 0.4}});
  kb.add("billboard", {{"billboard", 1.0}, {"building", 0.6}});
  kb.add("vehicle", {{"vehicle", 1.0}, {"building", 0.3}});
  kb.add("facility", {{"facility", 1.0}, {"vehicle", 0.5}, {"building", 0.3}});
  kb.add("building", {{"building", 1.0}});
  kb.add("tree", {{"tree", 1.0}});
  return kb;
}

void KnowledgeBase::add(const std::string& category, Entry entry) {
  for (const auto& [label, score] : entry)
    if (!std::isfinite(score) || score < 0.0 || score > 1.0)
      throw ValidationError({{"kb." + category + "." + label, "score must be in [0, 1]"}});
  entries_[category] = std::move(entry);
}

KnowledgeBase::Entry KnowledgeBase::lookup(const std::string& category) const {
  auto it = entries_.find(category);
  if (it == entries_.end()) return {{category, 1.0}};
  return it->second;
}

ScriptedOracle::ScriptedOracle(KnowledgeBase kb, ScriptedParams params)
    : kb_(std::move(kb)), params_(params) {}

std::set<std::string> ScriptedOracle::related_semantics(const TaskCue& cue) {
  std::set<std::string> out{cue.category};
  for (const auto& [label, score] : kb_.lookup(cue.category)) out.insert(label);
  return out;
}

mapping::AttractionTable ScriptedOracle::attraction_scores(const TaskCue& cue,
                                                           const std::set<std::string>& labels) {
  mapping::AttractionTable table;
  const auto entry = kb_.lookup(cue.category);
  for (const auto& label : labels) {
    double v = 0.0;
    for (const auto& [l, s] : entry)
      if (l == label) v = s;
    table.set(label, v);
  }
  return table;
}

double heading_error_deg(const sensor::Pose& pose, Vec3 target) {
  const double dx = target.x - pose.position.x;
  const double dy = target.y - pose.position.y;
  if (std::hypot(dx, dy) < 1e-9) return 0.0;
  double e = rad_to_deg(std::atan2(dy, dx)) - pose.yaw_deg;
  e = std::fmod(e + 540.0, 360.0) - 180.0;
  return std::abs(e);
}

std::optional<Action> greedy_step(const sensor::Pose& pose, Vec3 target,
                                  const std::vector<Action>& feasible,
                                  const planner::ActionParams& params) {
  const double here = distance(pose.position, target);
  std::optional<Action> best;
  double best_d = 0.0;
  double best_h = 0.0;
  for (Action a : feasible) {
    if (a == Action::Stop) continue;
    const sensor::Pose next = planner::apply(pose, a, params);
    const double d = distance(next.position, target);
    const double h = heading_error_deg(next, target);
    if (!best || d < best_d - 1e-12 || (std::abs(d - best_d) <= 1e-12 && h < best_h - 1e-12)) {
      best = a;
      best_d = d;
      best_h = h;
    }
  }
  if (!best || best_d >= here - 1e-9) return std::nullopt;
  return best;
}

namespace {

std::string fmt_point(Vec3 p) {
  std::ostringstream s;
  s.precision(1);
  s << std::fixed << "(" << p.x << ", " << p.y << ", " << p.z << ")";
  return s.str();
}

}  // namespace

Decision ScriptedOracle::decide(const planner::PlanRequest& request, const DecideContext& ctx) {
  Decision d;
  const auto chose = [&](Action a, std::string why) {
    d.action = a;
    d.rationale = std::move(why);
    d.exchange = {{"oracle", "scripted"},
                  {"action", std::string(planner::to_string(a))},
                  {"found_target", d.found_target},
                  {"rationale", d.rationale}};
    return d;
  };
  if (ctx.observation && identified(*ctx.observation, ctx.target_object_id, params_.identification)) {
    d.found_target = true;
    return chose(Action::Stop, "target identified in view");
  }

  const auto& feasible = ctx.feasible;

  bool use_exploit = request.exploitation.has_value();
  if (use_exploit && request.exploration && params_.attraction_as_probability)
    use_exploit = hash_uniform(ctx.seed, 1) < request.exploitation->attraction;

  // Turns toward `p` when it lies outside the central view cone.
  const auto face = [&](Vec3 p) -> std::optional<Action> {
    const double err = heading_error_deg(ctx.pose, p);
    if (err <= params_.actions.turn_deg / 2.0) return std::nullopt;
    const sensor::Pose left = planner::apply(ctx.pose, Action::TurnLeft45, params_.actions);
    const Action turn = heading_error_deg(left, p) < err ? Action::TurnLeft45 : Action::TurnRight45;
    if (std::find(feasible.begin(), feasible.end(), turn) == feasible.end()) return std::nullopt;
    return turn;
  };

  if (use_exploit) {
    const Vec3 pm = request.exploitation->target;
    if (auto a = face(pm)) return chose(*a, "face high-attraction cluster at " + fmt_point(pm));
    if (auto a = greedy_step(ctx.pose, pm, feasible, params_.actions))
      return chose(*a, "approach high-attraction cluster at " + fmt_point(pm));
    // No move gets closer to the centroid (often inside the object). Half the
    // time take a random translation to break cycles, otherwise face and
    // approach the cluster's nearest cell so it can be recognized.
    if (hash_uniform(ctx.seed, 2) < params_.stall_escape_prob) {
      std::vector<Action> moves;
      for (Action a : feasible)
        if (planner::is_translation(a)) moves.push_back(a);
      if (!moves.empty()) {
        Rng rng(mix_seed(ctx.seed, 3));
        return chose(moves[rng.below(moves.size())],
                     "stalled near cluster; random move");
      }
    }
    const auto& centers = request.exploitation->centers;
    if (!centers.empty()) {
      Vec3 near = centers.front();
      for (const Vec3& c : centers)
        if (distance(c, ctx.pose.position) < distance(near, ctx.pose.position)) near = c;
      if (auto a = face(near)) return chose(*a, "face nearest cluster cell at " + fmt_point(near));
      if (auto a = greedy_step(ctx.pose, near, feasible, params_.actions))
        return chose(*a, "approach nearest cluster cell at " + fmt_point(near));
    }
  }
  if (request.exploration)
    return chose(request.exploration->action, "explore toward the largest uncertainty reduction");

  Rng rng(ctx.seed);
  agent::FbeParams fp;
  fp.vertical_prob = params_.fbe_vertical_prob;
  return chose(agent::fbe_policy(rng, feasible, fp), "no advice; frontier sweep");
}

}  // namespace avos::oracle
