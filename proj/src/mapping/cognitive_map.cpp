#include "avos/mapping/cognitive_map.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>

#include "avos/core/hash.hpp"
#include "avos/mapping/map_dump.hpp"
#include "avos/mapping/uncertainty_map.hpp"

namespace avos::mapping {

AttractionTable::AttractionTable(const std::map<std::string, double>& values) {
  for (const auto& [k, v] : values) set(k, v);
}

void AttractionTable::set(const std::string& label, double value) {
  if (!std::isfinite(value) || value < 0.0 || value > 1.0)
    throw ValidationError({{"attraction." + label, "must be in [0, 1]"}});
  if (label == kUnknownLabel || label == kIgnoredLabel) return;
  values_[label] = value;
}

double AttractionTable::get(const std::string& label) const {
  auto it = values_.find(label);
  return it == values_.end() ? 0.0 : it->second;
}

nlohmann::json AttractionTable::to_json() const {
  nlohmann::json j = nlohmann::json::object();
  for (const auto& [k, v] : values_) j[k] = v;
  return j;
}

CognitiveGrid::CognitiveGrid(const GridSpec& spec)
    : spec_(spec),
      c_(static_cast<size_t>(spec.cell_count()), 0.0),
      mirror_(static_cast<size_t>(spec.cell_count()), 1) {}

void CognitiveGrid::set_cell(int64_t idx, double attraction) {
  const auto n = static_cast<size_t>(idx);
  c_[n] = mirror_[n] ? attraction : 0.0;
}

namespace {

std::vector<double> attraction_by_id(const LabelIndex& index, const AttractionTable& table) {
  std::vector<double> out(index.size(), 0.0);
  for (size_t id = 0; id < index.size(); ++id) out[id] = table.get(index.name(static_cast<LabelId>(id)));
  return out;
}

}  // namespace

void CognitiveGrid::refresh(const SemanticVoxelGrid& semantic, const AttractionTable& table,
                            const std::vector<int64_t>& touched) {
  if (!(semantic.spec() == spec_)) throw Error("cognitive refresh: grid spec mismatch");
  const auto a = attraction_by_id(semantic.label_index(), table);
  for (int64_t idx : touched) set_cell(idx, a[semantic.label_id(idx)]);
}

void CognitiveGrid::recompute(const SemanticVoxelGrid& semantic, const AttractionTable& table) {
  if (!(semantic.spec() == spec_)) throw Error("cognitive recompute: grid spec mismatch");
  const auto a = attraction_by_id(semantic.label_index(), table);
  for (int64_t idx = 0; idx < spec_.cell_count(); ++idx) set_cell(idx, a[semantic.label_id(idx)]);
}

std::vector<int64_t> CognitiveGrid::mark_recognized(const std::vector<uint8_t>& occupancy,
                                                    const sensor::Pose& pose,
                                                    const sensor::CameraModel& camera,
                                                    double step_size) {
  std::vector<int64_t> fresh;
  if (!(step_size > 0.0)) return fresh;
  // Every face of a cell whose center is within step_size lies within this cap.
  const double half_axis = 0.5 * std::max({spec_.cell.x, spec_.cell.y, spec_.cell.z});
  const auto vis = visible_cells(spec_, occupancy, pose, camera, step_size + half_axis);
  for (const auto& vc : vis) {
    if (distance(spec_.cell_center(spec_.unlinear(vc.index)), pose.position) > step_size) continue;
    const auto n = static_cast<size_t>(vc.index);
    if (mirror_[n]) fresh.push_back(vc.index);
    mirror_[n] = 0;
    c_[n] = 0.0;
  }
  return fresh;
}

nlohmann::json CognitiveGrid::dump() const {
  std::vector<float> v(c_.begin(), c_.end());
  return heatmap_dump(spec_, "cognitive", v);
}

uint64_t CognitiveGrid::digest() const {
  Fnv1a64 h;
  h.update("cognitive");
  std::vector<uint64_t> words(c_.size());
  std::memcpy(words.data(), c_.data(), c_.size() * sizeof(double));
  h.update_words(words);
  std::vector<uint64_t> m((mirror_.size() + 7) / 8, 0);
  std::memcpy(m.data(), mirror_.data(), mirror_.size());
  h.update_words(m);
  return h.digest();
}

}  // namespace avos::mapping
