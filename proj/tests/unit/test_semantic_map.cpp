#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>

#include "avos/mapping/semantic_map.hpp"
#include "fixtures.hpp"
#include "reference.hpp"

using namespace avos;
using namespace avos::mapping;
using sensor::CameraModel;
using sensor::Observation;
using sensor::Pose;
using sensor::SegmentedImage;
using fixtures::burst;
using fixtures::kBurstCell;

namespace {

const GridSpec kSpec = GridSpec::make(Aabb{{0, 0, 0}, {40, 40, 20}}, 2.0);

std::vector<LabelId> repeat(LabelId l, int n) { return std::vector<LabelId>(static_cast<size_t>(n), l); }

}  // namespace

TEST_CASE("fresh grid is unknown everywhere") {
  SemanticVoxelGrid g(kSpec);
  CHECK(g.label_of({0, 0, 0}) == "unknown");
  CHECK(g.label_of({19, 19, 9}) == "unknown");
  CHECK(g.total_count() == 0);
  CHECK_THROWS_AS(g.label_of({20, 0, 0}), OutOfRangeError);
}

TEST_CASE("single pixel sets the label") {
  SemanticVoxelGrid g(kSpec);
  const auto c = g.label_index().intern("sign");
  auto b = burst({c});
  const auto r = g.integrate(b.seg, b.obs, b.cam);
  CHECK(g.label_of(kBurstCell) == "sign");
  CHECK(r.touched == std::vector<int64_t>{kSpec.linear(kBurstCell)});
  CHECK(r.retained == 1);
}

TEST_CASE("strict majority wins") {
  SemanticVoxelGrid g(kSpec);
  const auto a = g.label_index().intern("a");
  const auto bl = g.label_index().intern("b");
  auto b = burst({a, a, bl});
  g.integrate(b.seg, b.obs, b.cam);
  CHECK(g.label_of(kBurstCell) == "a");
}

TEST_CASE("later evidence re-labels a cell") {
  SemanticVoxelGrid g(kSpec);
  const auto a = g.label_index().intern("a");
  const auto bl = g.label_index().intern("b");
  auto first = burst(repeat(a, 3));
  g.integrate(first.seg, first.obs, first.cam);
  CHECK(g.label_of(kBurstCell) == "a");
  auto second = burst(repeat(bl, 4));
  g.integrate(second.seg, second.obs, second.cam);
  CHECK(g.label_of(kBurstCell) == "b");
}

TEST_CASE("ties keep the incumbent, otherwise the smaller name") {
  SemanticVoxelGrid g(kSpec);
  const auto z = g.label_index().intern("zeta");
  const auto a = g.label_index().intern("alpha");
  auto first = burst(repeat(z, 2));
  g.integrate(first.seg, first.obs, first.cam);
  auto second = burst(repeat(a, 2));
  g.integrate(second.seg, second.obs, second.cam);
  CHECK(g.label_of(kBurstCell) == "zeta");

  SemanticVoxelGrid h(kSpec);
  const auto z2 = h.label_index().intern("zeta");
  const auto a2 = h.label_index().intern("alpha");
  auto both = burst({z2, a2});
  h.integrate(both.seg, both.obs, both.cam);
  CHECK(h.label_of(kBurstCell) == "alpha");
}

TEST_CASE("ignored and unknown pixels are not counted") {
  SemanticVoxelGrid g(kSpec);
  auto b = burst({kIgnoredId, kUnknownId, kIgnoredId});
  const auto r = g.integrate(b.seg, b.obs, b.cam);
  CHECK(r.retained == 0);
  CHECK(g.total_count() == 0);
  CHECK(g.label_of(kBurstCell) == "unknown");
  // The surface still marks the cell occupied.
  CHECK(g.occupied(kSpec.linear(kBurstCell)));
}

TEST_CASE("points outside the grid are dropped") {
  SemanticVoxelGrid g(kSpec);
  auto b = burst({g.label_index().intern("a")});
  b.obs.depth[0] = 55.0;
  CHECK(g.integrate(b.seg, b.obs, b.cam).retained == 0);
}

TEST_CASE("mismatched rasters are an error") {
  SemanticVoxelGrid g(kSpec);
  auto b = burst({2, 2});
  b.seg.labels.pop_back();
  CHECK_THROWS_AS(g.integrate(b.seg, b.obs, b.cam), Error);
}

TEST_CASE("last-observation mode clears touched histograms") {
  SemanticVoxelGrid g(kSpec, false);
  const auto a = g.label_index().intern("a");
  const auto bl = g.label_index().intern("b");
  auto first = burst(repeat(a, 5));
  g.integrate(first.seg, first.obs, first.cam);
  auto second = burst(repeat(bl, 1));
  g.integrate(second.seg, second.obs, second.cam);
  CHECK(g.label_of(kBurstCell) == "b");
  CHECK(g.total_count() == 1);
}

namespace {

struct Rendered {
  Observation obs;
  SegmentedImage seg;
};

std::vector<Rendered> random_views(const world::Scene& s, SemanticVoxelGrid& g, const CameraModel& cam,
                                   int count, uint64_t seed) {
  Rng rng(seed);
  std::set<std::string> related;
  for (const auto& o : s.objects) related.insert(o.label);
  related.erase("building");
  std::vector<Rendered> out;
  for (int n = 0; n < count; ++n) {
    Rendered r;
    r.obs = sensor::render(s, fixtures::free_pose(s, rng), cam, n);
    r.seg = sensor::segment(r.obs, s, related, g.label_index(), sensor::NoiseConfig{0.2, seed});
    out.push_back(std::move(r));
  }
  return out;
}

}  // namespace

TEST_CASE("histograms equal a per-pixel recount") {
  const auto s = fixtures::random_boxes(21, 30, kSpec.bounds, {"building", "tree", "shop", "sign"});
  SemanticVoxelGrid g(kSpec);
  const auto cam = CameraModel::from_fov(100, 100, 90, 60);
  auto views = random_views(s, g, cam, 6, 5);
  ref::Recount recount;
  uint64_t retained = 0;
  for (const auto& v : views) {
    retained += g.integrate(v.seg, v.obs, cam).retained;
    recount.add(kSpec, v.obs, v.seg.labels, cam, g.label_index().names());
  }
  uint64_t total = 0;
  for (const auto& [cell, votes] : recount.votes) {
    const auto& h = g.histogram(cell);
    std::map<uint16_t, uint32_t> got(h.begin(), h.end());
    CHECK(got == votes);
    for (const auto& [l, n] : votes) total += n;
    CHECK(g.label_id(cell) == recount.at(cell));
  }
  CHECK(g.total_count() == total);
  CHECK(g.total_count() == retained);
  CHECK(retained > 1000);
}

TEST_CASE("labels without ties do not depend on observation order") {
  const auto s = fixtures::random_boxes(22, 30, kSpec.bounds, {"building", "tree", "shop", "sign"});
  const auto cam = CameraModel::from_fov(64, 48, 90, 60);
  SemanticVoxelGrid fwd(kSpec), rev(kSpec);
  // Same interning order in both grids.
  for (const auto& l : {"sign", "shop", "tree"}) {
    fwd.label_index().intern(l);
    rev.label_index().intern(l);
  }
  auto views = random_views(s, fwd, cam, 8, 9);
  for (const auto& v : views) fwd.integrate(v.seg, v.obs, cam);
  for (auto it = views.rbegin(); it != views.rend(); ++it) rev.integrate(it->seg, it->obs, cam);
  int compared = 0;
  for (int64_t n = 0; n < kSpec.cell_count(); ++n) {
    const auto& h = fwd.histogram(n);
    if (h.empty()) continue;
    uint32_t top = 0;
    int at_top = 0;
    for (const auto& [l, c] : h) top = std::max(top, c);
    for (const auto& [l, c] : h) at_top += c == top;
    if (at_top > 1) continue;
    CHECK(fwd.label_id(n) == rev.label_id(n));
    ++compared;
  }
  CHECK(compared > 50);
}

TEST_CASE("dump is run-length encoded in linear order") {
  SemanticVoxelGrid g(kSpec);
  auto b = burst({g.label_index().intern("a")});
  g.integrate(b.seg, b.obs, b.cam);
  const auto doc = g.dump();
  CHECK(doc["layer"] == "semantic");
  int64_t cells = 0, pos = 0, hit_at = -1;
  for (const auto& run : doc["values"]) {
    if (run[0].get<int>() != 0) hit_at = pos;
    cells += run[1].get<int64_t>();
    pos += run[1].get<int64_t>();
  }
  CHECK(cells == kSpec.cell_count());
  CHECK(hit_at == kSpec.linear(kBurstCell));
}
