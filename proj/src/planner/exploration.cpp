#include "avos/planner/exploration.hpp"

#include <string>

namespace avos::planner {

mapping::RewardValue exploration_reward(const mapping::UncertaintyGrid& ugrid,
                                        const std::vector<uint8_t>& occupancy,
                                        const MotionContext& ctx, const sensor::Pose& pose,
                                        Action a) {
  if (!feasible(*ctx.scene, pose, a, ctx.actions, ctx.collision))
    throw InfeasibleActionError("action " + std::string(to_string(a)) + " is infeasible");
  const sensor::Pose next = apply(pose, a, ctx.actions);
  const auto vis = mapping::visible_cells(ugrid.spec(), occupancy, next, ctx.camera);
  return ugrid.reward(vis, next.position);
}

ExplorationAdvice best_exploration_action(const mapping::UncertaintyGrid& ugrid,
                                          const std::vector<uint8_t>& occupancy,
                                          const MotionContext& ctx, const sensor::Pose& pose) {
  ExplorationAdvice best;
  bool any = false;
  for (Action a : kAllActions) {
    if (a == Action::Stop || !feasible(*ctx.scene, pose, a, ctx.actions, ctx.collision)) continue;
    const auto r = exploration_reward(ugrid, occupancy, ctx, pose, a);
    best.evaluated.emplace_back(a, r);
    if (!any || r.raw > best.raw) {
      best.action = a;
      best.raw = r.raw;
      best.faces = r.faces;
      best.normalized = r.normalized();
      any = true;
    }
  }
  if (!any) throw DeadEndError("no feasible action besides Stop");
  return best;
}

}  // namespace avos::planner
