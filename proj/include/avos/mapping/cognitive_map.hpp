#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "avos/core/voxel_grid.hpp"
#include "avos/mapping/semantic_map.hpp"
#include "avos/sensor/camera.hpp"

namespace avos::mapping {

/// label -> attraction in [0, 1]. "unknown" and "ignored" are always 0 and
/// missing labels read as 0.
class AttractionTable {
 public:
  AttractionTable() = default;
  explicit AttractionTable(const std::map<std::string, double>& values);

  /// Throws ValidationError when the value is outside [0, 1] or not finite.
  void set(const std::string& label, double value);
  double get(const std::string& label) const;
  const std::map<std::string, double>& values() const { return values_; }

  nlohmann::json to_json() const;

 private:
  std::map<std::string, double> values_;
};

/// Attraction C and recognized flags C' over the semantic grid's spec.
/// After every update C = A(S) * C'.
class CognitiveGrid {
 public:
  explicit CognitiveGrid(const GridSpec& spec);

  const GridSpec& spec() const { return spec_; }
  double value(int64_t idx) const { return c_[static_cast<size_t>(idx)]; }
  bool unrecognized(int64_t idx) const { return mirror_[static_cast<size_t>(idx)] != 0; }
  const std::vector<double>& values() const { return c_; }
  const std::vector<uint8_t>& mirror() const { return mirror_; }

  /// Re-derives C on the touched cells only.
  void refresh(const SemanticVoxelGrid& semantic, const AttractionTable& table,
               const std::vector<int64_t>& touched);
  /// Re-derives C on every cell.
  void recompute(const SemanticVoxelGrid& semantic, const AttractionTable& table);

  /// Cells with a visible face from `pose` whose center lies within
  /// step_size of the eye get C' = 0 and C = 0. Returns the newly recognized
  /// cell indices.
  std::vector<int64_t> mark_recognized(const std::vector<uint8_t>& occupancy,
                                       const sensor::Pose& pose, const sensor::CameraModel& camera,
                                       double step_size);

  nlohmann::json dump() const;
  uint64_t digest() const;

 private:
  void set_cell(int64_t idx, double attraction);

  GridSpec spec_;
  std::vector<double> c_;
  std::vector<uint8_t> mirror_;
};

}  // namespace avos::mapping
