#include "avos/mapping/uncertainty_map.hpp"

#include <cmath>
#include <cstring>

#include "avos/core/hash.hpp"
#include "avos/mapping/map_dump.hpp"

namespace avos::mapping {

std::vector<VisibleCell> visible_cells(const GridSpec& spec, const std::vector<uint8_t>& occupancy,
                                       const sensor::Pose& pose, const sensor::CameraModel& camera,
                                       double max_distance) {
  if (!occupancy.empty() && occupancy.size() != static_cast<size_t>(spec.cell_count()))
    throw Error("visible_cells: occupancy size does not match the grid");
  kernels::VisibilityQuery q;
  q.spec = &spec;
  q.occupied = occupancy.empty() ? nullptr : occupancy.data();
  q.camera = camera;
  q.pose = pose;
  q.max_distance = max_distance;
  kernels::BlockGrid blocks;
  if (q.occupied) {
    blocks = kernels::BlockGrid::build(spec, q.occupied);
    q.blocks = &blocks;
  }
  return kernels::visible_parallel(q);
}

UncertaintyGrid::UncertaintyGrid(const GridSpec& spec, double alpha)
    : spec_(spec), alpha_(alpha), faces_(static_cast<size_t>(spec.cell_count()) * kFaceCount, 1.0) {
  if (!(alpha >= 0.0) || !std::isfinite(alpha)) throw Error("attenuation coefficient must be >= 0");
}

double UncertaintyGrid::falloff(double d) const { return std::exp(-alpha_ * d); }

double UncertaintyGrid::attenuate(const std::vector<VisibleCell>& vis, Vec3 eye) {
  return kernels::attenuate_parallel(spec_, faces_, alpha_, vis, eye);
}

RewardValue UncertaintyGrid::reward(const std::vector<VisibleCell>& vis, Vec3 eye) const {
  const auto s = kernels::reward_parallel(spec_, faces_, alpha_, vis, eye);
  return {s.raw, s.faces};
}

double UncertaintyGrid::mean() const {
  if (faces_.empty()) return 0.0;
  double s = 0.0;
  for (double u : faces_) s += u;
  return s / static_cast<double>(faces_.size());
}

std::vector<float> UncertaintyGrid::cell_means() const {
  std::vector<float> out(static_cast<size_t>(spec_.cell_count()));
  for (size_t c = 0; c < out.size(); ++c) {
    double s = 0.0;
    for (int f = 0; f < kFaceCount; ++f) s += faces_[c * kFaceCount + static_cast<size_t>(f)];
    out[c] = static_cast<float>(s / kFaceCount);
  }
  return out;
}

nlohmann::json UncertaintyGrid::dump() const {
  auto doc = heatmap_dump(spec_, "uncertainty", cell_means());
  doc["alpha"] = alpha_;
  return doc;
}

uint64_t UncertaintyGrid::digest() const {
  Fnv1a64 h;
  h.update("uncertainty");
  std::vector<uint64_t> words(faces_.size());
  std::memcpy(words.data(), faces_.data(), faces_.size() * sizeof(double));
  h.update_words(words);
  return h.digest();
}

}  // namespace avos::mapping
