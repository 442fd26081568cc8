#pragma once

#include "avos/sensor/observation.hpp"

namespace avos::oracle {

/// Stand-in for the model's "target found" judgement: the target object's
/// pixels within d_id metres cover at least kappa of the image.
struct IdentificationRule {
  double kappa = 0.05;
  double d_id = 20.0;  // m, ray length
};

double target_fraction(const sensor::Observation& obs, int target_object_id, double d_id);
bool identified(const sensor::Observation& obs, int target_object_id,
                const IdentificationRule& rule = {});

}  // namespace avos::oracle
