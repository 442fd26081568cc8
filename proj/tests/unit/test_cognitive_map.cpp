#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "avos/mapping/cognitive_map.hpp"
#include "avos/mapping/map_dump.hpp"
#include "avos/mapping/occupancy.hpp"
#include "fixtures.hpp"
#include "reference.hpp"

using namespace avos;
using namespace avos::mapping;
using fixtures::burst;
using fixtures::kBurstCell;
using sensor::CameraModel;
using sensor::Pose;

namespace {

const GridSpec kSpec = GridSpec::make(Aabb{{0, 0, 0}, {40, 40, 20}}, 2.0);
const CameraModel kCam = CameraModel::from_fov(64, 48, 90, 60);

void put(SemanticVoxelGrid& sem, CognitiveGrid& cog, const AttractionTable& table, const std::string& label) {
  auto b = burst({sem.label_index().intern(label)});
  const auto r = sem.integrate(b.seg, b.obs, b.cam);
  cog.refresh(sem, table, r.touched);
}

}  // namespace

TEST_CASE("attraction table bounds") {
  AttractionTable t;
  t.set("tree", 0.95);
  CHECK(t.get("tree") == 0.95);
  CHECK(t.get("missing") == 0.0);
  t.set("unknown", 1.0);
  CHECK(t.get("unknown") == 0.0);
  CHECK(t.get("ignored") == 0.0);
  CHECK_THROWS_AS(t.set("x", 1.5), ValidationError);
  CHECK_THROWS_AS(t.set("x", -0.1), ValidationError);
  CHECK_THROWS_AS(t.set("x", std::nan("")), ValidationError);
}

TEST_CASE("refresh applies A(label) to touched cells") {
  SemanticVoxelGrid sem(kSpec);
  CognitiveGrid cog(kSpec);
  const AttractionTable table({{"tree", 0.95}, {"sign", 0.9}});
  CHECK(cog.value(kSpec.linear(kBurstCell)) == 0.0);
  put(sem, cog, table, "tree");
  CHECK(cog.value(kSpec.linear(kBurstCell)) == 0.95);
  CHECK(cog.unrecognized(kSpec.linear(kBurstCell)));
}

TEST_CASE("unknown label has zero attraction") {
  SemanticVoxelGrid sem(kSpec);
  CognitiveGrid cog(kSpec);
  cog.recompute(sem, AttractionTable({{"tree", 1.0}}));
  for (double v : cog.values()) CHECK(v == 0.0);
}

TEST_CASE("spec mismatch is an error") {
  SemanticVoxelGrid sem(GridSpec::make(Aabb{{0, 0, 0}, {10, 10, 10}}, 2.0));
  CognitiveGrid cog(kSpec);
  CHECK_THROWS_AS(cog.refresh(sem, {}, {}), Error);
  CHECK_THROWS_AS(cog.recompute(sem, {}), Error);
}

TEST_CASE("incremental refresh equals full recompute") {
  const auto s = fixtures::random_boxes(31, 30, kSpec.bounds, {"building", "tree", "shop", "sign"});
  const AttractionTable table({{"tree", 0.95}, {"shop", 1.0}, {"sign", 0.9}});
  SemanticVoxelGrid sem(kSpec);
  CognitiveGrid inc(kSpec), full(kSpec);
  Rng rng(4);
  for (int n = 0; n < 50; ++n) {
    const Pose pose = fixtures::free_pose(s, rng);
    const auto obs = sensor::render(s, pose, kCam, n);
    const auto seg = sensor::segment(obs, s, {"tree", "shop", "sign"}, sem.label_index(), {0.3, 7});
    const auto r = sem.integrate(seg, obs, kCam);
    inc.refresh(sem, table, r.touched);
    if (n % 7 == 3) {
      // Recognition on both keeps the mirrors aligned.
      inc.mark_recognized(sem.occupancy(), pose, kCam, 5.0);
      full.mark_recognized(sem.occupancy(), pose, kCam, 5.0);
    }
  }
  full.recompute(sem, table);
  CHECK(inc.values() == full.values());
  CHECK(inc.mirror() == full.mirror());
}

TEST_CASE("occluded cell is not recognized") {
  std::vector<uint8_t> occ(static_cast<size_t>(kSpec.cell_count()), 0);
  occ[static_cast<size_t>(kSpec.linear({3, 2, 2}))] = 1;
  CognitiveGrid cog(kSpec);
  const Pose pose{{5, 5, 5}, 0, 0};
  cog.mark_recognized(occ, pose, kCam, 5.0);
  CHECK(cog.unrecognized(kSpec.linear({4, 2, 2})));
  CognitiveGrid open(kSpec);
  std::vector<uint8_t> empty(occ.size(), 0);
  open.mark_recognized(empty, pose, kCam, 5.0);
  CHECK(!open.unrecognized(kSpec.linear({4, 2, 2})));
}

TEST_CASE("visible cell at half a step is zeroed") {
  SemanticVoxelGrid sem(kSpec);
  CognitiveGrid cog(kSpec);
  put(sem, cog, AttractionTable({{"sign", 0.9}}), "sign");
  const int64_t idx = kSpec.linear(kBurstCell);  // center (11, 5, 5)
  REQUIRE(cog.value(idx) == 0.9);
  const Pose pose{{8.5, 5, 5}, 0, 0};
  const auto fresh = cog.mark_recognized(sem.occupancy(), pose, kCam, 5.0);
  CHECK(std::find(fresh.begin(), fresh.end(), idx) != fresh.end());
  CHECK(cog.value(idx) == 0.0);
  CHECK(!cog.unrecognized(idx));
  // Re-labelling never revives a recognized cell.
  put(sem, cog, AttractionTable({{"sign", 0.9}}), "sign");
  CHECK(cog.value(idx) == 0.0);
}

TEST_CASE("recognized set equals the exhaustive check on a 20^3 grid") {
  const auto spec = GridSpec::make(Aabb{{0, 0, 0}, {40, 40, 40}}, 2.0);
  Rng rng(12);
  const auto cam = CameraModel::from_fov(64, 48, 90, 60);
  for (int trial = 0; trial < 6; ++trial) {
    std::vector<uint8_t> occ(static_cast<size_t>(spec.cell_count()), 0);
    for (auto& o : occ) o = rng.uniform() < 0.08;
    const Pose pose{{rng.uniform(5, 35), rng.uniform(5, 35), rng.uniform(5, 35)}, rng.uniform(0, 360),
                    rng.uniform(-60, 30)};
    CognitiveGrid cog(spec);
    const double step = trial % 2 ? 5.0 : 8.0;
    auto fresh = cog.mark_recognized(occ, pose, cam, step);
    std::sort(fresh.begin(), fresh.end());
    std::vector<int64_t> expect;
    for (const auto& [idx, mask] : ref::visible_faces(spec, occ, pose, cam))
      if (distance(spec.cell_center(spec.unlinear(idx)), pose.position) <= step) expect.push_back(idx);
    CHECK(fresh == expect);
    for (int64_t n = 0; n < spec.cell_count(); ++n)
      CHECK(cog.unrecognized(n) == !std::binary_search(expect.begin(), expect.end(), n));
  }
}

TEST_CASE("recognition is monotone and zeroes attraction") {
  const auto s = fixtures::random_boxes(33, 30, kSpec.bounds, {"building", "tree", "shop"});
  const AttractionTable table({{"tree", 0.95}, {"shop", 1.0}});
  SemanticVoxelGrid sem(kSpec);
  CognitiveGrid cog(kSpec);
  Rng rng(8);
  std::vector<uint8_t> prev = cog.mirror();
  for (int n = 0; n < 30; ++n) {
    const Pose pose = fixtures::free_pose(s, rng);
    const auto obs = sensor::render(s, pose, kCam, n);
    const auto seg = sensor::segment(obs, s, {"tree", "shop"}, sem.label_index());
    cog.refresh(sem, table, sem.integrate(seg, obs, kCam).touched);
    cog.mark_recognized(sem.occupancy(), pose, kCam, 5.0);
    for (size_t c = 0; c < prev.size(); ++c) {
      CHECK(!(prev[c] == 0 && cog.mirror()[c] == 1));
      if (!cog.mirror()[c]) CHECK(cog.values()[c] == 0.0);
      CHECK(cog.values()[c] >= 0.0);
      CHECK(cog.values()[c] <= 1.0);
    }
    prev = cog.mirror();
  }
}

TEST_CASE("heatmap dump and max projection") {
  const auto spec = GridSpec::make(Aabb{{0, 0, 0}, {4, 4, 4}}, 2.0);
  std::vector<float> v{0.1f, 0.2f, 0.3f, 0.4f, 0.9f, 0.0f, 0.0f, 0.5f};
  const auto top = max_projection(spec, v);
  CHECK(top == std::vector<float>{0.9f, 0.2f, 0.3f, 0.5f});
  const auto doc = heatmap_dump(spec, "cognitive", v);
  CHECK(doc["dims"] == nlohmann::json::array({2, 2, 2}));
  CHECK(doc["encoding"] == "rle");
  // Two adjacent zeros collapse into one run.
  CHECK(doc["values"].size() == 7);
  int64_t cells = 0;
  for (const auto& run : doc["values"]) cells += run[1].get<int64_t>();
  CHECK(cells == 8);
}

TEST_CASE("scene occupancy marks overlapping cells") {
  const auto s = fixtures::scene({fixtures::object(1, "building", {2, 2, 0}, {6, 4, 2})});
  const auto occ = scene_occupancy(s, kSpec);
  int n = 0;
  for (auto o : occ) n += o;
  CHECK(n == 2);
  CHECK(occ[static_cast<size_t>(kSpec.linear({1, 1, 0}))]);
  CHECK(occ[static_cast<size_t>(kSpec.linear({2, 1, 0}))]);
}
