#pragma once

#include <cstdint>
#include <vector>

#include "avos/core/voxel_grid.hpp"
#include "avos/world/scene.hpp"

namespace avos::mapping {

/// Ground-truth occupancy: a cell is occupied when its box shares interior
/// volume with any object box.
std::vector<uint8_t> scene_occupancy(const world::Scene& scene, const GridSpec& spec);

}  // namespace avos::mapping
