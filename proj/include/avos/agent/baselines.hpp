#pragma once

#include <vector>

#include "avos/core/rng.hpp"
#include "avos/planner/actions.hpp"

namespace avos::agent {

/// Uniform over the feasible non-Stop actions. Throws DeadEndError when there
/// are none.
planner::Action re_policy(Rng& rng, const std::vector<planner::Action>& feasible);

struct FbeParams {
  double vertical_prob = 0.1;
};

/// Forward while the next step is free, otherwise TurnRight45. With
/// probability vertical_prob a feasible Ascend or Descend (equal odds)
/// replaces the horizontal choice. Exactly two draws per call.
planner::Action fbe_policy(Rng& rng, const std::vector<planner::Action>& feasible,
                           const FbeParams& params = {});

}  // namespace avos::agent
