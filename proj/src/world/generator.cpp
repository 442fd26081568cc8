#include "avos/world/generator.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <optional>

#include "avos/core/rng.hpp"

namespace avos::world {
namespace {

constexpr int kAttempts = 400;

const std::vector<std::string> kShopNames{
    "CENTRAL ALL-STAR", "BLUE BEAN CAFE",  "GOLDEN WOK",     "CITY BAKERY",     "NORTH STAR BOOKS",
    "PIXEL PHONES",     "GREEN LEAF TEA",  "SUNRISE DINER",  "IRON GYM",        "LUCKY MART",
    "RIVERSIDE FLORIST", "METRO PHARMACY", "ORBIT TOYS",     "MAPLE NOODLES",   "ZEN SPA",
    "HARBOR SEAFOOD",   "ATLAS HARDWARE",  "VELVET SHOES",   "COMET LAUNDRY",   "PEARL JEWELRY",
    "ECHO MUSIC",       "NOVA OPTICS",     "SAFFRON KITCHEN", "TIDE SURF SHOP", "BRICK PIZZA",
    "CEDAR FURNITURE",  "LOTUS NAILS",     "QUARTZ WATCHES", "SPRUCE OUTDOORS", "HONEY DESSERTS"};
const std::vector<std::string> kSignTexts{
    "Customs Office", "Metro Station", "City Hospital", "Police Station", "Post Office",
    "Public Library", "Parking Garage", "Bus Terminal",  "Town Hall",      "Fire Station",
    "Tax Bureau",     "Museum",        "Visitor Center", "Court House",   "Water Works"};
const std::vector<std::string> kBillboardTexts{
    "SKYLINE SODA", "ROCKET BANK", "AURORA CARS", "PULSE MOBILE", "ZENITH AIR", "MERIDIAN HOTEL",
    "FLUX ENERGY",  "SUMMIT TEA",  "NIMBUS TV",   "VERTEX SHOES"};
const std::vector<std::string> kVehicleKinds{"black car", "white van", "red truck", "blue car",
                                             "silver suv", "yellow taxi", "green bus"};
const std::vector<std::string> kFacilityKinds{"garbage station", "bus stop", "newspaper kiosk",
                                              "charging station", "fire hydrant box"};

std::array<uint8_t, 3> base_color(const std::string& label) {
  static const std::map<std::string, std::array<uint8_t, 3>> colors{
      {"building", {150, 150, 160}}, {"shop", {220, 120, 60}},     {"tree", {40, 140, 50}},
      {"sign", {40, 90, 200}},       {"vehicle", {30, 30, 30}},     {"billboard", {230, 200, 40}},
      {"facility", {120, 70, 140}}};
  auto it = colors.find(label);
  return it == colors.end() ? std::array<uint8_t, 3>{128, 128, 128} : it->second;
}

std::array<uint8_t, 3> vary(std::array<uint8_t, 3> c, Rng& rng) {
  for (auto& ch : c) ch = static_cast<uint8_t>(std::clamp(static_cast<int>(ch) + rng.range(-15, 15), 0, 255));
  return c;
}

Aabb box_at(double x0, double y0, double z0, double sx, double sy, double sz) {
  return {{x0, y0, z0}, {x0 + sx, y0 + sy, z0 + sz}};
}

class Builder {
 public:
  Builder(uint64_t seed, const SceneParams& p) : rng_(seed), params_(p) {
    const double w = std::sqrt(p.area * p.aspect);
    const double d = p.area / w;
    scene_.scene_id = p.scene_id;
    scene_.ground_height = 0.0;
    scene_.bounds = {{0.0, 0.0, 0.0}, {std::round(w * 100.0) / 100.0, std::round(d * 100.0) / 100.0, p.height}};
  }

  Scene build() {
    for (int n = 0; n < params_.buildings; ++n) place_building();
    place_shops(params_.shops);
    for (int n = 0; n < params_.billboards; ++n) place_billboard();
    for (int n = 0; n < params_.trees; ++n) place_near_shop_or_open("tree", "", 0.7);
    for (int n = 0; n < params_.signs; ++n) place_sign(pick_text(kSignTexts, sign_used_));
    for (int n = 0; n < params_.facilities; ++n) place_facility(pick_text(kFacilityKinds, facility_used_));
    for (int n = 0; n < params_.vehicles; ++n) place_vehicle(pick_vehicle());
    for (int n = 0; n < params_.duplicates; ++n) place_duplicate();
    return std::move(scene_);
  }

 private:
  [[noreturn]] void fail(const std::string& what) const {
    throw GenerationError("cannot place " + what + " in scene '" + scene_.scene_id +
                          "' without overlap; reduce object counts or enlarge the area");
  }

  bool fits(const Aabb& b, double clearance) const {
    if (!scene_.bounds.contains(b)) return false;
    const Aabb probe = b.inflated(clearance);
    for (const auto& o : scene_.objects)
      if (probe.overlaps_interior(o.box)) return false;
    return true;
  }
  // Attached objects may touch their host but nothing may overlap.
  bool fits_attached(const Aabb& b, double clearance, int host_id) const {
    if (!scene_.bounds.contains(b)) return false;
    for (const auto& o : scene_.objects) {
      if (b.overlaps_interior(o.box)) return false;
      if (o.object_id != host_id && o.label != "shop" && b.inflated(clearance).overlaps_interior(o.box))
        return false;
    }
    return true;
  }

  int add(const std::string& label, const std::string& text, const Aabb& box) {
    SceneObject o;
    o.object_id = static_cast<int>(scene_.objects.size()) + 1;
    o.label = label;
    o.instance_text = text;
    o.box = box;
    o.display_color = vary(base_color(label), rng_);
    scene_.objects.push_back(o);
    return o.object_id;
  }

  std::string pick_text(const std::vector<std::string>& pool, std::map<std::string, int>& used) {
    const std::string& base = pool[rng_.below(pool.size())];
    const int n = used[base]++;
    return n == 0 ? base : base + " " + std::to_string(n + 1);
  }
  std::string pick_vehicle() {
    const std::string& kind = kVehicleKinds[rng_.below(kVehicleKinds.size())];
    return kind + " plate " + std::to_string(rng_.range(1000, 9999));
  }

  // Copies: the object list grows while callers iterate.
  std::vector<SceneObject> of_label(const std::string& label) const {
    std::vector<SceneObject> out;
    for (const auto& o : scene_.objects)
      if (o.label == label) out.push_back(o);
    return out;
  }

  void place_building() {
    const double top = std::min(28.0, params_.height - 12.0);
    for (int a = 0; a < kAttempts; ++a) {
      const double sx = rng_.uniform(12.0, 24.0), sy = rng_.uniform(12.0, 24.0);
      const double sz = rng_.uniform(10.0, std::max(10.5, top));
      const Vec3 e = scene_.bounds.extent();
      if (e.x < sx + 20.0 || e.y < sy + 20.0) break;
      const double x = rng_.uniform(10.0, e.x - 10.0 - sx), y = rng_.uniform(10.0, e.y - 10.0 - sy);
      const Aabb b = box_at(std::round(x), std::round(y), 0.0, std::round(sx), std::round(sy), std::round(sz));
      if (fits(b, 9.0)) {
        add("building", "", b);
        return;
      }
    }
    fail("building");
  }

  // Footprint of a slab of depth `depth` protruding from face `face` of `host`,
  // covering [s, s + width] along the face.
  static Aabb on_face(const Aabb& host, int face, double s, double width, double depth,
                      double offset, double z0, double sz) {
    const double o = offset;
    switch (face) {
      case 0:  // -x
        return box_at(host.min.x - o - depth, host.min.y + s, z0, depth, width, sz);
      case 1:  // +x
        return box_at(host.max.x + o, host.min.y + s, z0, depth, width, sz);
      case 2:  // -y
        return box_at(host.min.x + s, host.min.y - o - depth, z0, width, depth, sz);
      default:  // +y
        return box_at(host.min.x + s, host.max.y + o, z0, width, depth, sz);
    }
  }
  static double face_length(const Aabb& host, int face) {
    return face < 2 ? host.extent().y : host.extent().x;
  }

  void place_shops(int count) {
    int placed = 0;
    int stalls = 0;
    const auto buildings = of_label("building");
    if (count > 0 && buildings.empty()) fail("shop (no buildings)");
    while (placed < count) {
      if (++stalls > kAttempts) fail("shop");
      const SceneObject& host = buildings[rng_.below(buildings.size())];
      const Aabb hb = host.box;
      const int host_id = host.object_id;
      const int face = static_cast<int>(rng_.below(4));
      const double len = face_length(hb, face);
      const int row = std::min(count - placed, rng_.range(2, 4));
      double s = std::round(rng_.uniform(0.0, std::max(0.0, len - 6.0)));
      for (int n = 0; n < row && placed < count; ++n) {
        const double w = std::round(rng_.uniform(5.0, 7.0));
        if (s + w > len) break;
        const Aabb b = on_face(hb, face, s, w, 1.2, 0.0, 0.0, std::round(rng_.uniform(3.5, 4.5) * 2) / 2);
        if (!fits_attached(b, 2.0, host_id)) break;
        add("shop", pick_text(kShopNames, shop_used_), b);
        ++placed;
        s += w;
      }
    }
  }

  // A small box standing `offset` metres in front of a random shop.
  std::optional<Aabb> near_shop(double along, double depth, double sz, double offset_lo, double offset_hi) {
    const auto shops = of_label("shop");
    if (shops.empty()) return std::nullopt;
    const Aabb sb = shops[rng_.below(shops.size())].box;
    // The shop's outward face is the one not touching its building.
    int face = 0;
    const Vec3 e = sb.extent();
    const bool thin_x = e.x < e.y;
    for (const auto& o : scene_.objects) {
      if (o.label != "building") continue;
      if (thin_x && sb.max.x == o.box.min.x) face = 0;
      if (thin_x && sb.min.x == o.box.max.x) face = 1;
      if (!thin_x && sb.max.y == o.box.min.y) face = 2;
      if (!thin_x && sb.min.y == o.box.max.y) face = 3;
    }
    const double len = face_length(sb, face);
    const double s = rng_.uniform(-2.0, std::max(-1.0, len - along + 2.0));
    const double off = rng_.uniform(offset_lo, offset_hi);
    return on_face(sb, face, s, along, depth, off, 0.0, sz);
  }

  std::optional<Aabb> in_open(double sx, double sy, double sz) {
    const Vec3 e = scene_.bounds.extent();
    if (e.x < sx + 4 || e.y < sy + 4) return std::nullopt;
    const double x = rng_.uniform(2.0, e.x - 2.0 - sx), y = rng_.uniform(2.0, e.y - 2.0 - sy);
    return box_at(x, y, 0.0, sx, sy, sz);
  }

  void place_near_shop_or_open(const std::string& label, const std::string& text, double p_near) {
    for (int a = 0; a < kAttempts; ++a) {
      const double sz = rng_.uniform(5.0, 8.0);
      const double side = rng_.uniform(2.5, 3.5);
      std::optional<Aabb> b = rng_.bernoulli(p_near) ? near_shop(side, side, sz, 4.0, 7.0)
                                                     : in_open(side, side, sz);
      if (b && fits(*b, 1.0)) {
        add(label, text, *b);
        return;
      }
    }
    fail(label);
  }

  void place_sign(const std::string& text) {
    for (int a = 0; a < kAttempts; ++a) {
      std::optional<Aabb> b;
      if (rng_.bernoulli(0.6)) {
        b = near_shop(1.6, 0.4, 2.5, 2.0, 3.5);
      } else {
        const bool along_x = rng_.bernoulli(0.5);
        b = in_open(along_x ? 1.6 : 0.4, along_x ? 0.4 : 1.6, 2.5);
      }
      if (b && fits(*b, 1.0)) {
        add("sign", text, *b);
        return;
      }
    }
    fail("sign");
  }

  Aabb facility_shape(const std::string& kind, bool along_x) const {
    double a = 3.0, b = 2.0, h = 2.4;
    if (kind.rfind("bus stop", 0) == 0) a = 4.0, b = 1.4, h = 2.6;
    if (kind.rfind("newspaper kiosk", 0) == 0) a = 2.5, b = 2.5, h = 3.0;
    if (kind.rfind("charging station", 0) == 0) a = 1.2, b = 0.8, h = 2.0;
    if (kind.rfind("fire hydrant box", 0) == 0) a = 1.0, b = 1.0, h = 1.5;
    return along_x ? box_at(0, 0, 0, a, b, h) : box_at(0, 0, 0, b, a, h);
  }

  bool try_place_shaped(const std::string& label, const std::string& text, const Aabb& shape,
                        double p_near, double clearance) {
    const Vec3 e = shape.extent();
    for (int a = 0; a < kAttempts; ++a) {
      std::optional<Aabb> b = rng_.bernoulli(p_near) ? near_shop(e.x, e.y, e.z, 3.0, 8.0)
                                                     : in_open(e.x, e.y, e.z);
      if (b) b->max = b->min + e;
      if (b && fits(*b, clearance)) {
        add(label, text, *b);
        return true;
      }
    }
    return false;
  }

  void place_facility(const std::string& kind) {
    if (!try_place_shaped("facility", kind, facility_shape(kind, rng_.bernoulli(0.5)), 0.5, 1.0))
      fail("facility");
  }

  void place_vehicle(const std::string& text) {
    const bool along_x = rng_.bernoulli(0.5);
    const Aabb shape = along_x ? box_at(0, 0, 0, 4.6, 1.9, 1.5) : box_at(0, 0, 0, 1.9, 4.6, 1.5);
    if (!try_place_shaped("vehicle", text, shape, 0.0, 2.0)) fail("vehicle");
  }

  void place_billboard() {
    const auto buildings = of_label("building");
    if (buildings.empty()) fail("billboard (no buildings)");
    for (int a = 0; a < kAttempts; ++a) {
      const SceneObject& host = buildings[rng_.below(buildings.size())];
      const Aabb hb = host.box;
      const bool along_x = rng_.bernoulli(0.5);
      const double sx = along_x ? 7.0 : 0.5, sy = along_x ? 0.5 : 7.0;
      const Vec3 e = hb.extent();
      if (e.x < sx || e.y < sy) continue;
      const double x = hb.min.x + rng_.uniform(0.0, e.x - sx), y = hb.min.y + rng_.uniform(0.0, e.y - sy);
      const Aabb b = box_at(x, y, hb.max.z, sx, sy, 3.5);
      if (fits_attached(b, 0.5, host.object_id)) {
        add("billboard", pick_text(kBillboardTexts, billboard_used_), b);
        return;
      }
    }
    fail("billboard");
  }

  void place_duplicate() {
    std::vector<SceneObject> candidates;
    for (const auto& o : scene_.objects)
      if (o.label == "sign" || o.label == "facility" || o.label == "vehicle" || o.label == "shop")
        candidates.push_back(o);
    if (candidates.empty()) fail("duplicate (no target-category objects)");
    const SceneObject src = candidates[rng_.below(candidates.size())];
    const Vec3 e = src.box.extent();
    if (src.label == "shop") {
      // Shop twins go on a facade like any other shop.
      const auto buildings = of_label("building");
      for (int a = 0; a < kAttempts; ++a) {
        const SceneObject& host = buildings[rng_.below(buildings.size())];
        const int face = static_cast<int>(rng_.below(4));
        const double len = face_length(host.box, face);
        const double w = std::max(e.x, e.y);
        if (len < w) continue;
        const double s = std::round(rng_.uniform(0.0, len - w));
        const Aabb b = on_face(host.box, face, s, w, 1.2, 0.0, 0.0, e.z);
        if (fits_attached(b, 2.0, host.object_id)) {
          add(src.label, src.instance_text, b);
          return;
        }
      }
      fail("duplicate shop");
    }
    if (!try_place_shaped(src.label, src.instance_text, box_at(0, 0, 0, e.x, e.y, e.z), 0.5, 1.0))
      fail("duplicate " + src.label);
  }

  Rng rng_;
  SceneParams params_;
  Scene scene_;
  std::map<std::string, int> shop_used_, sign_used_, billboard_used_, facility_used_;
};

std::string capitalize_first(std::string s) {
  if (!s.empty() && s[0] >= 'a' && s[0] <= 'z') s[0] = static_cast<char>(s[0] - 'a' + 'A');
  return s;
}

}  // namespace

SceneParams SceneParams::for_area(std::string scene_id, double area, int duplicates) {
  SceneParams p;
  p.scene_id = std::move(scene_id);
  p.area = area;
  p.buildings = std::max(2, static_cast<int>(std::lround(area / 3000.0)));
  p.shops = std::max(3, p.buildings * 2);
  p.trees = std::max(4, static_cast<int>(std::lround(p.shops * 1.2)));
  p.signs = std::max(2, p.buildings);
  p.vehicles = std::max(2, static_cast<int>(std::lround(area / 3000.0)));
  p.billboards = std::max(1, p.buildings / 3);
  p.facilities = std::max(2, static_cast<int>(std::lround(area / 5000.0)));
  p.duplicates = duplicates;
  return p;
}

Scene generate_scene(uint64_t seed, const SceneParams& params) {
  if (!(params.area >= SceneParams::min_area && params.area <= SceneParams::max_area))
    throw GenerationError("scene area " + std::to_string(params.area) + " m^2 outside [" +
                          std::to_string(SceneParams::min_area) + ", " +
                          std::to_string(SceneParams::max_area) + "]");
  if (!(params.aspect > 0.2 && params.aspect < 5.0)) throw GenerationError("aspect must be in (0.2, 5)");
  if (!(params.height >= 20.0)) throw GenerationError("scene height must be at least 20 m");
  return Builder(seed, params).build();
}

std::string describe_target(const SceneObject& o) {
  if (o.label == "shop") return "Search for the shop named " + o.instance_text + ".";
  if (o.label == "sign") return "Find the sign reading '" + o.instance_text + "'.";
  if (o.label == "billboard") return "Find the rooftop billboard advertising " + o.instance_text + ".";
  if (o.label == "vehicle") return "Find the parked " + o.instance_text + ".";
  if (o.label == "facility") return capitalize_first("find the " + o.instance_text + ".");
  return "Find the " + o.label + (o.instance_text.empty() ? "" : " " + o.instance_text) + ".";
}

std::vector<Task> derive_tasks(const Scene& scene, uint64_t seed, const TaskParams& params,
                               const DifficultyRule& rule) {
  std::vector<Task> tasks;
  Rng rng(seed);
  const CollisionModel collision;
  const auto& cats = target_categories();
  int n = 0;
  for (const auto& obj : scene.objects) {
    if (std::find(cats.begin(), cats.end(), obj.label) == cats.end()) continue;
    const auto difficulty = rule.classify(scene.footprint_area(), is_unique_target(scene, obj));
    if (!difficulty) continue;
    const Vec3 target = obj.box.center();
    std::optional<sensor::Pose> start;
    for (int a = 0; a < 300 && !start; ++a) {
      const double r = rng.uniform(params.min_start_distance, params.max_start_distance);
      const double phi = rng.uniform(0.0, 2.0 * kPi);
      const double z = params.start_altitudes[rng.below(params.start_altitudes.size())];
      const Vec3 p{std::round((target.x + r * std::cos(phi)) * 10.0) / 10.0,
                   std::round((target.y + r * std::sin(phi)) * 10.0) / 10.0, z};
      if (!collision.position_free(scene, p)) continue;
      sensor::Pose pose;
      pose.position = p;
      pose.yaw_deg = 45.0 * static_cast<double>(rng.below(8));
      pose.pitch_deg = params.start_pitch_deg;
      start = pose;
    }
    if (!start) continue;
    Task t;
    t.id = scene.scene_id + "-t" + std::to_string(n++);
    t.scene_id = scene.scene_id;
    t.difficulty = *difficulty;
    t.image_ref = "images/" + t.id + ".png";
    t.text = describe_target(obj);
    t.target_position = target;
    t.initial_pose = *start;
    t.target_object_id = obj.object_id;
    t.target_label = obj.label;
    tasks.push_back(std::move(t));
    if (params.max_tasks >= 0 && static_cast<int>(tasks.size()) >= params.max_tasks) break;
  }
  return tasks;
}

Benchmark build_benchmark(uint64_t seed, const BenchmarkParams& params) {
  Benchmark bench;
  Rng rng(seed);
  std::map<Difficulty, int> have;
  const int want = params.per_difficulty;
  int scene_no = 0;
  const auto collect = [&](bool large, Difficulty wanted, int duplicates) {
    int guard = 0;
    while (have[wanted] < want) {
      if (++guard > 200) throw GenerationError("benchmark builder could not reach the task quota");
      const double area = large ? rng.uniform(params.large_area_min, params.large_area_max)
                                : rng.uniform(params.small_area_min, params.small_area_max);
      const std::string id = "s" + std::to_string(scene_no++);
      SceneParams sp = SceneParams::for_area(id, std::round(area), duplicates);
      sp.aspect = rng.uniform(0.75, 1.33);
      Scene scene;
      try {
        scene = generate_scene(rng.next(), sp);
      } catch (const GenerationError&) {
        continue;
      }
      auto tasks = derive_tasks(scene, rng.next(), large ? params.large_tasks : params.small_tasks);
      std::vector<Task> picked;
      for (auto& t : tasks)
        if (t.difficulty == wanted) picked.push_back(std::move(t));
      // Deterministic shuffle so tasks are not biased to the first-placed objects.
      for (size_t i = picked.size(); i > 1; --i) std::swap(picked[i - 1], picked[rng.below(i)]);
      int taken = 0;
      for (auto& t : picked) {
        if (taken >= params.max_tasks_per_scene || have[wanted] >= want) break;
        bench.tasks.push_back(std::move(t));
        ++have[wanted];
        ++taken;
      }
      if (taken > 0) bench.scenes.push_back(std::move(scene));
    }
  };
  collect(false, Difficulty::Easy, 0);
  collect(true, Difficulty::Medium, 0);
  collect(true, Difficulty::Hard, 2);
  return bench;
}

}  // namespace avos::world
