#pragma once

#include <array>
#include <string_view>
#include <vector>

#include "avos/sensor/camera.hpp"
#include "avos/world/scene.hpp"

namespace avos::planner {

// Enum order is the tie-break order everywhere.
enum class Action {
  MoveForward,
  MoveBackward,
  MoveLeft,
  MoveRight,
  Ascend,
  Descend,
  TurnLeft45,
  TurnRight45,
  Stop
};

inline constexpr std::array<Action, 9> kAllActions{
    Action::MoveForward, Action::MoveBackward, Action::MoveLeft,    Action::MoveRight, Action::Ascend,
    Action::Descend,     Action::TurnLeft45,   Action::TurnRight45, Action::Stop};

std::string_view to_string(Action a);
/// Throws ParseError for unknown names.
Action action_from_string(std::string_view s);

bool is_translation(Action a);

struct ActionParams {
  double step_size = 5.0;  // m
  double turn_deg = 45.0;
};

/// Horizontal moves follow the yaw only; pitch is unchanged by every action.
/// TurnLeft45 increases yaw. Stop returns the pose unchanged.
sensor::Pose apply(const sensor::Pose& pose, Action a, const ActionParams& params = {});

bool feasible(const world::Scene& scene, const sensor::Pose& pose, Action a,
              const ActionParams& params = {}, const world::CollisionModel& collision = {});

/// Feasible actions in enum order; Stop is always included.
std::vector<Action> feasible_actions(const world::Scene& scene, const sensor::Pose& pose,
                                     const ActionParams& params = {},
                                     const world::CollisionModel& collision = {});

}  // namespace avos::planner
