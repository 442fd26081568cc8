#include "avos/mapping/occupancy.hpp"

#include <algorithm>
#include <cmath>

namespace avos::mapping {

std::vector<uint8_t> scene_occupancy(const world::Scene& scene, const GridSpec& spec) {
  std::vector<uint8_t> occ(static_cast<size_t>(spec.cell_count()), 0);
  const int n[3] = {spec.nx, spec.ny, spec.nz};
  for (const auto& o : scene.objects) {
    int lo[3], hi[3];
    for (int a = 0; a < 3; ++a) {
      lo[a] = std::clamp(static_cast<int>(std::floor((o.box.min[a] - spec.bounds.min[a]) / spec.cell[a])), 0, n[a] - 1);
      hi[a] = std::clamp(static_cast<int>(std::floor((o.box.max[a] - spec.bounds.min[a]) / spec.cell[a])), 0, n[a] - 1);
    }
    for (int k = lo[2]; k <= hi[2]; ++k)
      for (int j = lo[1]; j <= hi[1]; ++j)
        for (int i = lo[0]; i <= hi[0]; ++i)
          if (spec.cell_box({i, j, k}).overlaps_interior(o.box)) occ[static_cast<size_t>(spec.linear({i, j, k}))] = 1;
  }
  return occ;
}

}  // namespace avos::mapping
