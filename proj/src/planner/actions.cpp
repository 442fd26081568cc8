#include "avos/planner/actions.hpp"

#include <cmath>
#include <string>

namespace avos::planner {

std::string_view to_string(Action a) {
  switch (a) {
    case Action::MoveForward:
      return "MoveForward";
    case Action::MoveBackward:
      return "MoveBackward";
    case Action::MoveLeft:
      return "MoveLeft";
    case Action::MoveRight:
      return "MoveRight";
    case Action::Ascend:
      return "Ascend";
    case Action::Descend:
      return "Descend";
    case Action::TurnLeft45:
      return "TurnLeft45";
    case Action::TurnRight45:
      return "TurnRight45";
    case Action::Stop:
      return "Stop";
  }
  return "Stop";
}

Action action_from_string(std::string_view s) {
  for (Action a : kAllActions)
    if (to_string(a) == s) return a;
  throw ParseError("unknown action '" + std::string(s) + "'");
}

bool is_translation(Action a) {
  return a != Action::TurnLeft45 && a != Action::TurnRight45 && a != Action::Stop;
}

sensor::Pose apply(const sensor::Pose& pose, Action a, const ActionParams& params) {
  sensor::Pose out = pose;
  const double yaw = deg_to_rad(pose.yaw_deg);
  const Vec3 fwd{std::cos(yaw), std::sin(yaw), 0.0};
  const Vec3 left{-std::sin(yaw), std::cos(yaw), 0.0};
  const double s = params.step_size;
  switch (a) {
    case Action::MoveForward:
      out.position = pose.position + fwd * s;
      break;
    case Action::MoveBackward:
      out.position = pose.position - fwd * s;
      break;
    case Action::MoveLeft:
      out.position = pose.position + left * s;
      break;
    case Action::MoveRight:
      out.position = pose.position - left * s;
      break;
    case Action::Ascend:
      out.position.z += s;
      break;
    case Action::Descend:
      out.position.z -= s;
      break;
    case Action::TurnLeft45:
      out.yaw_deg = sensor::normalize_yaw(pose.yaw_deg + params.turn_deg);
      break;
    case Action::TurnRight45:
      out.yaw_deg = sensor::normalize_yaw(pose.yaw_deg - params.turn_deg);
      break;
    case Action::Stop:
      break;
  }
  return out;
}

bool feasible(const world::Scene& scene, const sensor::Pose& pose, Action a,
              const ActionParams& params, const world::CollisionModel& collision) {
  if (a == Action::Stop) return true;
  if (!is_translation(a)) return collision.position_free(scene, pose.position);
  return collision.segment_free(scene, pose.position, apply(pose, a, params).position);
}

std::vector<Action> feasible_actions(const world::Scene& scene, const sensor::Pose& pose,
                                     const ActionParams& params,
                                     const world::CollisionModel& collision) {
  std::vector<Action> out;
  for (Action a : kAllActions)
    if (feasible(scene, pose, a, params, collision)) out.push_back(a);
  return out;
}

}  // namespace avos::planner
