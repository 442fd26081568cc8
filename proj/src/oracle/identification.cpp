#include "avos/oracle/identification.hpp"

namespace avos::oracle {

double target_fraction(const sensor::Observation& obs, int target_object_id, double d_id) {
  if (obs.pixel_count() == 0 || target_object_id <= 0) return 0.0;
  size_t hits = 0;
  for (size_t n = 0; n < obs.pixel_count(); ++n)
    if (obs.semantic_ids[n] == target_object_id && obs.depth[n] > 0.0 && obs.depth[n] <= d_id) ++hits;
  return static_cast<double>(hits) / static_cast<double>(obs.pixel_count());
}

bool identified(const sensor::Observation& obs, int target_object_id, const IdentificationRule& rule) {
  return target_fraction(obs, target_object_id, rule.d_id) >= rule.kappa;
}

}  // namespace avos::oracle
