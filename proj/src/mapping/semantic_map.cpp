#include "avos/mapping/semantic_map.hpp"

#include <algorithm>
#include <cstring>

#include "avos/core/hash.hpp"
#include "avos/mapping/map_dump.hpp"

namespace avos::mapping {

SemanticVoxelGrid::SemanticVoxelGrid(const GridSpec& spec, bool cumulative)
    : labels_(spec, kUnknownId),
      occupancy_(static_cast<size_t>(spec.cell_count()), 0),
      cumulative_(cumulative) {}

const SemanticVoxelGrid::Histogram& SemanticVoxelGrid::histogram(int64_t idx) const {
  static const Histogram empty;
  auto it = histograms_.find(idx);
  return it == histograms_.end() ? empty : it->second;
}

IntegrateResult SemanticVoxelGrid::integrate(const sensor::SegmentedImage& seg,
                                             const sensor::Observation& obs,
                                             const sensor::CameraModel& camera) {
  if (seg.width != obs.width || seg.height != obs.height || obs.width != camera.width ||
      obs.height != camera.height || seg.labels.size() != obs.pixel_count() ||
      obs.depth.size() != obs.pixel_count())
    throw Error("integrate: raster dimensions do not match");

  const GridSpec& spec = labels_.spec();
  std::vector<std::pair<int64_t, LabelId>> votes;
  votes.reserve(obs.pixel_count() / 4);
  for (int v = 0; v < obs.height; ++v) {
    for (int u = 0; u < obs.width; ++u) {
      const size_t px = obs.at(u, v);
      const double len = obs.depth[px];
      if (len <= 0.0) continue;
      const double z = sensor::ray_length_to_z(u, v, len, camera);
      // Pushed 1 um past the surface so hits on a cell boundary bin into the
      // box that was hit.
      const double zn = z + kSurfaceNudge * z / len;
      const Vec3 p = sensor::backproject(u, v, zn, camera, obs.pose);
      auto c = spec.try_index(p);
      if (!c) continue;
      const int64_t idx = spec.linear(*c);
      occupancy_[static_cast<size_t>(idx)] = 1;
      const LabelId label = seg.labels[px];
      if (label != kUnknownId && label != kIgnoredId) votes.emplace_back(idx, label);
    }
  }

  IntegrateResult result;
  result.retained = votes.size();
  for (const auto& [idx, label] : votes) result.touched.push_back(idx);
  std::sort(result.touched.begin(), result.touched.end());
  result.touched.erase(std::unique(result.touched.begin(), result.touched.end()), result.touched.end());

  if (!cumulative_) {
    for (int64_t idx : result.touched) {
      auto it = histograms_.find(idx);
      if (it == histograms_.end()) continue;
      for (const auto& [l, n] : it->second) total_ -= n;
      it->second.clear();
    }
  }
  for (const auto& [idx, label] : votes) {
    auto& h = histograms_[idx];
    auto it = std::find_if(h.begin(), h.end(), [&](const auto& e) { return e.first == label; });
    if (it == h.end())
      h.emplace_back(label, 1u);
    else
      ++it->second;
    ++total_;
  }
  for (int64_t idx : result.touched) recompute(idx);
  return result;
}

void SemanticVoxelGrid::recompute(int64_t idx) {
  const Histogram& h = histogram(idx);
  const LabelId incumbent = labels_[idx];
  uint32_t best_count = 0;
  for (const auto& [l, n] : h) best_count = std::max(best_count, n);
  LabelId best = kUnknownId;
  if (best_count > 0) {
    bool incumbent_tied = false;
    for (const auto& [l, n] : h)
      if (n == best_count && l == incumbent) incumbent_tied = true;
    if (incumbent_tied && incumbent != kUnknownId) {
      best = incumbent;
    } else {
      const std::string* best_name = nullptr;
      for (const auto& [l, n] : h) {
        if (n != best_count) continue;
        if (!best_name || index_.name(l) < *best_name) {
          best = l;
          best_name = &index_.name(l);
        }
      }
    }
  }
  labels_[idx] = best;
}

nlohmann::json SemanticVoxelGrid::dump() const {
  nlohmann::json doc = dump_header(labels_.spec(), "semantic");
  doc["labels"] = index_.names();
  doc["encoding"] = "rle";
  doc["values"] = run_length_encode(labels_.data());
  return doc;
}

uint64_t SemanticVoxelGrid::digest() const {
  Fnv1a64 h;
  h.update("semantic");
  for (const auto& n : index_.names()) h.update(n);
  const auto& d = labels_.data();
  std::vector<uint64_t> words((d.size() + 3) / 4, 0);
  std::memcpy(words.data(), d.data(), d.size() * sizeof(LabelId));
  h.update_words(words);
  return h.digest();
}

}  // namespace avos::mapping
