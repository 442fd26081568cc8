#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "avos/core/voxel_grid.hpp"

namespace avos::mapping {

inline constexpr int kDumpFormatVersion = 1;

/// Shared header of every map dump.
nlohmann::json dump_header(const GridSpec& spec, const std::string& layer);

/// Run-length encoding as [[value, count], ...] in linear cell order
/// (i fastest, then j, then k).
template <typename T>
nlohmann::json run_length_encode(const std::vector<T>& values) {
  nlohmann::json runs = nlohmann::json::array();
  size_t n = 0;
  while (n < values.size()) {
    size_t m = n + 1;
    while (m < values.size() && values[m] == values[n]) ++m;
    runs.push_back(nlohmann::json::array({values[n], m - n}));
    n = m;
  }
  return runs;
}

/// Per-cell float heatmap document (cognitive and uncertainty layers).
nlohmann::json heatmap_dump(const GridSpec& spec, const std::string& layer,
                            const std::vector<float>& values);

/// Top-down max projection (ny rows of nx values) of a per-cell array.
std::vector<float> max_projection(const GridSpec& spec, const std::vector<float>& values);

}  // namespace avos::mapping
