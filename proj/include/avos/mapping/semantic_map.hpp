#pragma once

#include <cstdint>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include <json.hpp>

#include "avos/core/labels.hpp"
#include "avos/core/voxel_grid.hpp"
#include "avos/sensor/observation.hpp"
#include "avos/sensor/render.hpp"

namespace avos::mapping {

inline constexpr double kSurfaceNudge = 1e-6;  // m

struct IntegrateResult {
  std::vector<int64_t> touched;  // sorted, unique linear indices
  uint64_t retained = 0;         // pixels binned into a cell
};

/// Object-centric semantic voxel map. Each cell keeps a label histogram and
/// its current label: the histogram argmax, keeping the incumbent on ties
/// and otherwise taking the lexicographically smallest label.
class SemanticVoxelGrid {
 public:
  explicit SemanticVoxelGrid(const GridSpec& spec, bool cumulative = true);

  const GridSpec& spec() const { return labels_.spec(); }
  LabelIndex& label_index() { return index_; }
  const LabelIndex& label_index() const { return index_; }

  /// Back-projects every labelled pixel with depth > 0 and adds its label to
  /// the cell histogram. "ignored" and "unknown" pixels and points outside
  /// the grid are skipped. With cumulative=false a touched cell's histogram
  /// is cleared before this observation's votes are added.
  IntegrateResult integrate(const sensor::SegmentedImage& seg, const sensor::Observation& obs,
                            const sensor::CameraModel& camera);

  LabelId label_id(int64_t idx) const { return labels_[idx]; }
  const std::string& label_of(CellIndex c) const { return index_.name(labels_.at(c)); }
  /// Cells that received any back-projected surface point, labelled or not.
  bool occupied(int64_t idx) const { return occupancy_[static_cast<size_t>(idx)] != 0; }
  const std::vector<uint8_t>& occupancy() const { return occupancy_; }

  using Histogram = std::vector<std::pair<LabelId, uint32_t>>;
  /// Empty for never-observed cells.
  const Histogram& histogram(int64_t idx) const;
  uint64_t total_count() const { return total_; }

  const VoxelGrid<LabelId>& labels() const { return labels_; }

  nlohmann::json dump() const;
  uint64_t digest() const;

 private:
  void recompute(int64_t idx);

  LabelIndex index_;
  VoxelGrid<LabelId> labels_;
  std::vector<uint8_t> occupancy_;
  std::unordered_map<int64_t, Histogram> histograms_;
  uint64_t total_ = 0;
  bool cumulative_ = true;
};

}  // namespace avos::mapping
