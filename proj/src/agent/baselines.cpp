#include "avos/agent/baselines.hpp"

#include <algorithm>

namespace avos::agent {

using planner::Action;

namespace {

bool has(const std::vector<Action>& v, Action a) { return std::find(v.begin(), v.end(), a) != v.end(); }

}  // namespace

Action re_policy(Rng& rng, const std::vector<Action>& feasible) {
  std::vector<Action> moves;
  for (Action a : feasible)
    if (a != Action::Stop) moves.push_back(a);
  if (moves.empty()) throw DeadEndError("no feasible action besides Stop");
  return moves[static_cast<size_t>(rng.below(moves.size()))];
}

Action fbe_policy(Rng& rng, const std::vector<Action>& feasible, const FbeParams& params) {
  const double u = rng.uniform();
  const double side = rng.uniform();
  if (u < params.vertical_prob) {
    const Action first = side < 0.5 ? Action::Ascend : Action::Descend;
    const Action second = side < 0.5 ? Action::Descend : Action::Ascend;
    if (has(feasible, first)) return first;
    if (has(feasible, second)) return second;
  }
  if (has(feasible, Action::MoveForward)) return Action::MoveForward;
  if (has(feasible, Action::TurnRight45)) return Action::TurnRight45;
  throw DeadEndError("no feasible action besides Stop");
}

}  // namespace avos::agent
