#include "avos/mapping/map_dump.hpp"

#include <algorithm>

namespace avos::mapping {

nlohmann::json dump_header(const GridSpec& spec, const std::string& layer) {
  using nlohmann::json;
  return json{{"format_version", kDumpFormatVersion},
              {"layer", layer},
              {"units", {{"length", "m"}}},
              {"bounds_min", json::array({spec.bounds.min.x, spec.bounds.min.y, spec.bounds.min.z})},
              {"bounds_max", json::array({spec.bounds.max.x, spec.bounds.max.y, spec.bounds.max.z})},
              {"cell", json::array({spec.cell.x, spec.cell.y, spec.cell.z})},
              {"dims", json::array({spec.nx, spec.ny, spec.nz})},
              {"order", "i-fastest"}};
}

nlohmann::json heatmap_dump(const GridSpec& spec, const std::string& layer,
                            const std::vector<float>& values) {
  nlohmann::json doc = dump_header(spec, layer);
  doc["encoding"] = "rle";
  doc["values"] = run_length_encode(values);
  return doc;
}

std::vector<float> max_projection(const GridSpec& spec, const std::vector<float>& values) {
  std::vector<float> top(static_cast<size_t>(spec.nx) * spec.ny, 0.0f);
  for (int k = 0; k < spec.nz; ++k)
    for (int j = 0; j < spec.ny; ++j)
      for (int i = 0; i < spec.nx; ++i) {
        const auto idx = static_cast<size_t>(spec.linear({i, j, k}));
        auto& t = top[static_cast<size_t>(j) * spec.nx + i];
        t = std::max(t, values[idx]);
      }
  return top;
}

}  // namespace avos::mapping
