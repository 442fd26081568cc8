#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <set>

#include "avos/world/generator.hpp"
#include "avos/world/io.hpp"
#include "fixtures.hpp"

using namespace avos;
using namespace avos::world;

TEST_CASE("generation is deterministic") {
  const auto p = SceneParams::for_area("s7", 12000.0);
  CHECK(dump_scene(generate_scene(7, p)) == dump_scene(generate_scene(7, p)));
  CHECK(dump_scene(generate_scene(7, p)) != dump_scene(generate_scene(8, p)));
  const auto a = generate_scene(7, p);
  CHECK(derive_tasks(a, 3) == derive_tasks(a, 3));
}

TEST_CASE("minimum area scene is small") {
  const auto s = generate_scene(1, SceneParams::for_area("min", SceneParams::min_area));
  CHECK(DifficultyRule{}.is_small(s.footprint_area()));
  CHECK(s.footprint_area() == doctest::Approx(5600.0).epsilon(0.01));
}

TEST_CASE("thirty objects never overlap") {
  SceneParams p;
  p.scene_id = "thirty";
  p.area = 20000;
  p.duplicates = 1;
  const auto s = generate_scene(1, p);
  REQUIRE(s.objects.size() == 30);
  for (size_t a = 0; a < s.objects.size(); ++a)
    for (size_t b = a + 1; b < s.objects.size(); ++b)
      CHECK_FALSE(s.objects[a].box.overlaps_interior(s.objects[b].box));
  CHECK(validate_scene(s).empty());
}

TEST_CASE("every configured category is present") {
  SceneParams p;
  p.area = 30000;
  const auto s = generate_scene(11, p);
  std::set<std::string> labels;
  for (const auto& o : s.objects) labels.insert(o.label);
  for (const auto& c : generator_categories()) CHECK(labels.count(c) == 1);
}

TEST_CASE("overfull parameters fail to generate") {
  SceneParams p;
  p.area = SceneParams::min_area;
  p.buildings = 400;
  CHECK_THROWS_AS(generate_scene(1, p), GenerationError);
  p.buildings = 4;
  p.area = 100.0;
  CHECK_THROWS_AS(generate_scene(1, p), Error);
}

TEST_CASE("difficulty rule") {
  const DifficultyRule r;
  CHECK(r.classify(5600, true) == Difficulty::Easy);
  CHECK(r.classify(19999, true) == Difficulty::Easy);
  CHECK(r.classify(20000, true) == Difficulty::Medium);
  CHECK(r.classify(82800, false) == Difficulty::Hard);
  CHECK(!r.classify(10000, false));
}

TEST_CASE("unique shop in a small scene is easy") {
  const auto s = fixtures::scene({fixtures::object(1, "building", {10, 10, 0}, {30, 30, 20}),
                                  fixtures::object(2, "shop", {30, 15, 0}, {31, 25, 4}, "cafe CENTRAL"),
                                  fixtures::object(3, "tree", {40, 40, 0}, {42, 42, 6})});
  const auto tasks = derive_tasks(s, 1);
  bool found = false;
  for (const auto& t : tasks)
    if (t.target_object_id == 2) {
      found = true;
      CHECK(t.difficulty == Difficulty::Easy);
      CHECK(t.target_position == Vec3{30.5, 20, 2});
    }
  CHECK(found);
}

TEST_CASE("two identical facilities in a large scene are hard") {
  const auto s = fixtures::scene({fixtures::object(1, "facility", {20, 20, 0}, {23, 22, 3}, "garbage station"),
                                  fixtures::object(2, "facility", {120, 120, 0}, {123, 122, 3}, "garbage station"),
                                  fixtures::object(3, "vehicle", {60, 60, 0}, {65, 62, 2})},
                                 Aabb{{0, 0, 0}, {160, 160, 40}});
  const auto tasks = derive_tasks(s, 1);
  int hard = 0;
  for (const auto& t : tasks)
    if (t.target_label == "facility") {
      CHECK(t.difficulty == Difficulty::Hard);
      ++hard;
    }
  CHECK(hard == 2);
}

TEST_CASE("empty scene yields no tasks") {
  CHECK(derive_tasks(fixtures::scene({}), 1).empty());
}

TEST_CASE("difficulty matches an exhaustive uniqueness scan") {
  const auto bench = build_benchmark(1);
  std::map<std::string, const Scene*> by_id;
  for (const auto& s : bench.scenes) by_id[s.scene_id] = &s;
  int counts[3] = {0, 0, 0};
  for (const auto& t : bench.tasks) {
    const Scene& s = *by_id.at(t.scene_id);
    const SceneObject* target = s.find(t.target_object_id);
    REQUIRE(target);
    int same = 0;
    for (const auto& o : s.objects) same += o.label == target->label && o.instance_text == target->instance_text;
    const bool small = s.footprint_area() < 20000.0;
    const Difficulty expected = same == 1 ? (small ? Difficulty::Easy : Difficulty::Medium) : Difficulty::Hard;
    CHECK(t.difficulty == expected);
    CHECK(!(small && same > 1));
    CHECK(target->box.contains(t.target_position));
    CHECK(s.bounds.contains(t.initial_pose.position));
    CHECK(validate_task(t, s).empty());
    ++counts[static_cast<int>(t.difficulty)];
  }
  CHECK(counts[0] == 20);
  CHECK(counts[1] == 20);
  CHECK(counts[2] == 20);
}

TEST_CASE("scene round trip") {
  const auto s = generate_scene(5, SceneParams::for_area("rt", 9000));
  const auto back = parse_scene(dump_scene(s));
  CHECK(back == s);
  const auto dir = fixtures::temp_dir("world_rt");
  save_scene(s, dir / "s.json");
  CHECK(load_scene(dir / "s.json") == s);
}

TEST_CASE("task file round trip and suite loading") {
  const auto s = generate_scene(5, SceneParams::for_area("rt", 9000));
  const auto dir = fixtures::temp_dir("world_tasks");
  save_scene(s, dir / "rt.json");
  TaskFile tf;
  tf.tasks = derive_tasks(s, 2);
  REQUIRE(!tf.tasks.empty());
  tf.scene_files["rt"] = "rt.json";
  save_tasks(tf, dir / "tasks.json");
  const auto back = load_tasks(dir / "tasks.json");
  CHECK(back.tasks == tf.tasks);
  const auto suite = load_suite(dir / "tasks.json");
  CHECK(suite.scene_for(suite.tasks.front()) == s);
  CHECK_THROWS_AS(suite.task("nope"), Error);
}

TEST_CASE("P0 outside bounds names P0") {
  const auto s = generate_scene(5, SceneParams::for_area("v", 9000));
  auto t = derive_tasks(s, 2).front();
  t.initial_pose.position.z = s.bounds.max.z + 10;
  const auto v = validate_task(t, s);
  REQUIRE(!v.empty());
  bool named = false;
  for (const auto& x : v) named |= x.path.rfind("P0", 0) == 0;
  CHECK(named);
}

TEST_CASE("invalid scenes list every breach") {
  auto s = fixtures::scene({fixtures::object(1, "", {1, 1, 1}, {0, 2, 2}), fixtures::object(1, "x", {1, 1, 1}, {2, 2, 99})});
  const auto v = validate_scene(s);
  CHECK(v.size() >= 4);
  CHECK_THROWS_AS(parse_scene(dump_scene(s)), ValidationError);
  CHECK_THROWS_AS(parse_scene("{not json"), ParseError);
}

namespace {

void leaves(nlohmann::json& j, std::vector<nlohmann::json*>& out) {
  out.push_back(&j);
  if (j.is_object())
    for (auto& [k, v] : j.items()) leaves(v, out);
  else if (j.is_array())
    for (auto& v : j) leaves(v, out);
}

}  // namespace

TEST_CASE("fuzzed scene files load or fail with a structured error") {
  const auto s = generate_scene(3, SceneParams::for_area("fuzz", 7000));
  const std::string text = dump_scene(s);
  Rng rng(99);
  const std::vector<nlohmann::json> replacements{nullptr, -1, 0, 1e308, "x", nlohmann::json::array(),
                                                 nlohmann::json::object(), true, -5.5, 70000};
  int loaded = 0, rejected = 0;
  for (int n = 0; n < 100; ++n) {
    std::string mutated;
    if (n % 2 == 0) {
      mutated = text;
      const int edits = rng.range(1, 4);
      for (int e = 0; e < edits; ++e) {
        const size_t pos = rng.below(mutated.size());
        switch (rng.range(0, 2)) {
          case 0: mutated[pos] = static_cast<char>(rng.range(32, 126)); break;
          case 1: mutated.erase(pos, rng.below(8) + 1); break;
          default: mutated.insert(pos, 1, "{}[],:\"0-"[rng.below(9)]);
        }
      }
    } else {
      auto doc = nlohmann::json::parse(text);
      std::vector<nlohmann::json*> nodes;
      leaves(doc, nodes);
      *nodes[rng.below(nodes.size())] = replacements[rng.below(replacements.size())];
      mutated = doc.dump();
    }
    try {
      const auto scene = parse_scene(mutated);
      CHECK(validate_scene(scene).empty());
      ++loaded;
    } catch (const avos::Error&) {
      ++rejected;
    }
  }
  CHECK(loaded + rejected == 100);
  CHECK(rejected > 0);
}
