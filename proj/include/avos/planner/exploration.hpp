#pragma once

#include <utility>
#include <vector>

#include "avos/mapping/uncertainty_map.hpp"
#include "avos/planner/actions.hpp"

namespace avos::planner {

struct MotionContext {
  const world::Scene* scene = nullptr;
  sensor::CameraModel camera;
  ActionParams actions;
  world::CollisionModel collision;
};

/// Uncertainty removed if `a` were executed: the post-action visible set
/// over the current occupancy, scored without touching the grid. Throws
/// InfeasibleActionError.
mapping::RewardValue exploration_reward(const mapping::UncertaintyGrid& ugrid,
                                        const std::vector<uint8_t>& occupancy,
                                        const MotionContext& ctx, const sensor::Pose& pose,
                                        Action a);

struct ExplorationAdvice {
  Action action = Action::MoveForward;
  double raw = 0.0;
  int64_t faces = 0;
  double normalized = 0.0;  // raw / faces
  std::vector<std::pair<Action, mapping::RewardValue>> evaluated;  // enum order
};

/// Argmax of the raw reward over feasible non-Stop actions; the earliest
/// action in enum order wins ties. Throws DeadEndError when nothing but Stop
/// is feasible.
ExplorationAdvice best_exploration_action(const mapping::UncertaintyGrid& ugrid,
                                          const std::vector<uint8_t>& occupancy,
                                          const MotionContext& ctx, const sensor::Pose& pose);

}  // namespace avos::planner
