#include "avos/world/io.hpp"

#include <fstream>
#include <limits>
#include <sstream>

namespace avos::world {
namespace {

using nlohmann::json;

json vec_json(Vec3 v) { return json::array({v.x, v.y, v.z}); }

[[noreturn]] void parse_fail(const std::string& path, const std::string& what) {
  throw ParseError(path + ": " + what);
}

const json& field(const json& obj, const char* key, const std::string& path) {
  if (!obj.is_object()) parse_fail(path, "expected an object");
  auto it = obj.find(key);
  if (it == obj.end()) parse_fail(path + "." + key, "missing field");
  return *it;
}

double number(const json& v, const std::string& path) {
  if (!v.is_number()) parse_fail(path, "expected a number");
  return v.get<double>();
}

int integer(const json& v, const std::string& path) {
  if (!v.is_number_integer()) parse_fail(path, "expected an integer");
  const auto x = v.get<int64_t>();
  if (x < std::numeric_limits<int>::min() || x > std::numeric_limits<int>::max())
    parse_fail(path, "integer out of range");
  return static_cast<int>(x);
}

std::string string(const json& v, const std::string& path) {
  if (!v.is_string()) parse_fail(path, "expected a string");
  return v.get<std::string>();
}

Vec3 vec(const json& v, const std::string& path) {
  if (!v.is_array() || v.size() != 3) parse_fail(path, "expected [x, y, z]");
  return {number(v[0], path + "[0]"), number(v[1], path + "[1]"), number(v[2], path + "[2]")};
}

void check_header(const json& doc, int version, const char* kind) {
  if (!doc.is_object()) parse_fail(kind, "document must be an object");
  const int v = integer(field(doc, "format_version", kind), std::string(kind) + ".format_version");
  if (v != version) parse_fail(std::string(kind) + ".format_version", "unsupported version " + std::to_string(v));
}

json units_json() { return json{{"length", "m"}, {"angle", "deg"}}; }

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

json parse_json(const std::string& text, const std::string& what) {
  try {
    return json::parse(text);
  } catch (const json::exception& e) {
    throw ParseError(what + ": " + e.what());
  }
}

}  // namespace

json scene_to_json(const Scene& scene) {
  json objects = json::array();
  for (const auto& o : scene.objects) {
    objects.push_back(json{{"object_id", o.object_id},
                           {"label", o.label},
                           {"instance_text", o.instance_text},
                           {"box_min", vec_json(o.box.min)},
                           {"box_max", vec_json(o.box.max)},
                           {"display_color", json::array({o.display_color[0], o.display_color[1],
                                                          o.display_color[2]})}});
  }
  return json{{"format_version", kSceneFormatVersion},
              {"units", units_json()},
              {"scene_id", scene.scene_id},
              {"bounds", json{{"min", vec_json(scene.bounds.min)}, {"max", vec_json(scene.bounds.max)}}},
              {"ground_height", scene.ground_height},
              {"objects", objects}};
}

Scene scene_from_json(const json& doc) {
  check_header(doc, kSceneFormatVersion, "scene");
  Scene s;
  s.scene_id = string(field(doc, "scene_id", "scene"), "scene_id");
  const json& b = field(doc, "bounds", "scene");
  s.bounds = {vec(field(b, "min", "bounds"), "bounds.min"), vec(field(b, "max", "bounds"), "bounds.max")};
  s.ground_height = number(field(doc, "ground_height", "scene"), "ground_height");
  const json& objs = field(doc, "objects", "scene");
  if (!objs.is_array()) parse_fail("objects", "expected an array");
  for (size_t n = 0; n < objs.size(); ++n) {
    const std::string p = "objects[" + std::to_string(n) + "]";
    const json& o = objs[n];
    SceneObject obj;
    obj.object_id = integer(field(o, "object_id", p), p + ".object_id");
    obj.label = string(field(o, "label", p), p + ".label");
    if (o.contains("instance_text")) obj.instance_text = string(o["instance_text"], p + ".instance_text");
    obj.box = {vec(field(o, "box_min", p), p + ".box_min"), vec(field(o, "box_max", p), p + ".box_max")};
    if (o.contains("display_color")) {
      const json& c = o["display_color"];
      if (!c.is_array() || c.size() != 3) parse_fail(p + ".display_color", "expected [r, g, b]");
      for (int ch = 0; ch < 3; ++ch) {
        const int v = integer(c[static_cast<size_t>(ch)], p + ".display_color");
        if (v < 0 || v > 255) parse_fail(p + ".display_color", "channel outside [0, 255]");
        obj.display_color[static_cast<size_t>(ch)] = static_cast<uint8_t>(v);
      }
    }
    s.objects.push_back(std::move(obj));
  }
  if (auto v = validate_scene(s); !v.empty()) throw ValidationError(std::move(v));
  return s;
}

json pose_to_json(const sensor::Pose& pose) {
  return json{{"position", vec_json(pose.position)}, {"yaw_deg", pose.yaw_deg}, {"pitch_deg", pose.pitch_deg}};
}

sensor::Pose pose_from_json(const json& doc, const std::string& path) {
  sensor::Pose p;
  p.position = vec(field(doc, "position", path), path + ".position");
  p.yaw_deg = number(field(doc, "yaw_deg", path), path + ".yaw_deg");
  p.pitch_deg = number(field(doc, "pitch_deg", path), path + ".pitch_deg");
  return p;
}

json task_to_json(const Task& t) {
  return json{{"id", t.id},
              {"scene_id", t.scene_id},
              {"difficulty", std::string(to_string(t.difficulty))},
              {"image", t.image_ref},
              {"text", t.text},
              {"target_position", vec_json(t.target_position)},
              {"initial_pose", pose_to_json(t.initial_pose)},
              {"target_object_id", t.target_object_id},
              {"target_label", t.target_label}};
}

Task task_from_json(const json& doc, const std::string& path) {
  Task t;
  t.id = string(field(doc, "id", path), path + ".id");
  t.scene_id = string(field(doc, "scene_id", path), path + ".scene_id");
  t.difficulty = difficulty_from_string(string(field(doc, "difficulty", path), path + ".difficulty"));
  t.image_ref = string(field(doc, "image", path), path + ".image");
  t.text = string(field(doc, "text", path), path + ".text");
  t.target_position = vec(field(doc, "target_position", path), path + ".target_position");
  t.initial_pose = pose_from_json(field(doc, "initial_pose", path), path + ".initial_pose");
  t.target_object_id = integer(field(doc, "target_object_id", path), path + ".target_object_id");
  t.target_label = string(field(doc, "target_label", path), path + ".target_label");
  return t;
}

std::string dump_scene(const Scene& scene) { return scene_to_json(scene).dump(1) + "\n"; }

void save_scene(const Scene& scene, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path.string());
  out << dump_scene(scene);
}

Scene parse_scene(const std::string& text) { return scene_from_json(parse_json(text, "scene")); }

Scene load_scene(const std::filesystem::path& path) { return parse_scene(read_file(path)); }

void save_tasks(const TaskFile& file, const std::filesystem::path& path) {
  json tasks = json::array();
  for (const auto& t : file.tasks) tasks.push_back(task_to_json(t));
  json doc{{"format_version", kTaskFormatVersion},
           {"units", units_json()},
           {"scene_files", file.scene_files},
           {"tasks", tasks}};
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path.string());
  out << doc.dump(1) << "\n";
}

TaskFile load_tasks(const std::filesystem::path& path) {
  const json doc = parse_json(read_file(path), path.string());
  check_header(doc, kTaskFormatVersion, "tasks");
  TaskFile f;
  const json& sf = field(doc, "scene_files", "tasks");
  if (!sf.is_object()) parse_fail("scene_files", "expected an object");
  for (auto it = sf.begin(); it != sf.end(); ++it)
    f.scene_files[it.key()] = string(it.value(), "scene_files." + it.key());
  const json& ts = field(doc, "tasks", "tasks");
  if (!ts.is_array()) parse_fail("tasks", "expected an array");
  for (size_t n = 0; n < ts.size(); ++n) f.tasks.push_back(task_from_json(ts[n], "tasks[" + std::to_string(n) + "]"));
  return f;
}

const Scene& Suite::scene_for(const Task& t) const {
  auto it = scenes.find(t.scene_id);
  if (it == scenes.end()) throw Error("no scene '" + t.scene_id + "' for task " + t.id);
  return it->second;
}

const Task& Suite::task(const std::string& id) const {
  for (const auto& t : tasks)
    if (t.id == id) return t;
  throw Error("unknown task id '" + id + "'");
}

Suite load_suite(const std::filesystem::path& tasks_path) {
  TaskFile f = load_tasks(tasks_path);
  Suite suite;
  const auto dir = tasks_path.parent_path();
  for (const auto& [id, rel] : f.scene_files) suite.scenes.emplace(id, load_scene(dir / rel));
  for (auto& t : f.tasks) {
    const Scene& s = suite.scene_for(t);
    auto v = validate_task(t, s);
    if (!v.empty()) {
      for (auto& x : v) x.path = t.id + "." + x.path;
      throw ValidationError(std::move(v));
    }
  }
  suite.tasks = std::move(f.tasks);
  return suite;
}

}  // namespace avos::world
