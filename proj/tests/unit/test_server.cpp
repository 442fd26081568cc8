#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <thread>

#include <httplib.h>

#include "avos/eval/metrics.hpp"
#include "avos/server/server.hpp"
#include "fixtures.hpp"

using namespace avos;
using namespace avos::server;
using nlohmann::json;

namespace {

world::Suite street_suite() {
  world::Suite s;
  auto scene = fixtures::scene({fixtures::object(1, "shop", {40, 30, 0}, {46, 38, 8}),
                                fixtures::object(2, "building", {10, 65, 0}, {30, 78, 25}),
                                fixtures::object(3, "sign", {74, 10, 0}, {75, 12, 3})},
                               {{0, 0, 0}, {80, 80, 30}}, "street");
  world::Task far;
  far.id = "far";
  far.scene_id = "street";
  far.image_ref = "images/far.png";
  far.text = "sign 3";
  far.target_position = {74.5, 11, 1.5};
  far.initial_pose = {{10, 40, 15}, 0, -15};
  far.target_object_id = 3;
  far.target_label = "sign";
  world::Task near = far;
  near.id = "near";
  near.initial_pose = {{68, 11, 2.5}, 0, 0};
  s.tasks = {far, near};
  s.scenes.emplace("street", scene);
  return s;
}

ServerConfig config(const std::string& name) {
  ServerConfig c;
  c.data_dir = fixtures::temp_dir(name);
  c.defaults.camera = sensor::CameraModel::from_fov(80, 60, 60, 60);
  c.defaults.max_steps = 20;
  return c;
}

std::string session_of(const Response& r) { return r.json()["session_id"]; }

std::string act(const std::string& a) { return json{{"action", a}}.dump(); }

}  // namespace

TEST_CASE("session lifecycle and status codes") {
  SessionManager m(street_suite(), config("server_lifecycle"));
  CHECK(m.tasks().json().size() == 2);

  CHECK(m.create("not json").status == 400);
  CHECK(m.create("{}").status == 400);
  CHECK(m.create(R"({"task_id": "nope"})").status == 404);
  CHECK(m.create(R"({"task_id": "far", "agent": "robot"})").status == 400);
  CHECK(m.create(R"({"task_id": "far", "seed": -1})").status == 400);

  const auto created = m.create(R"({"task_id": "far"})");
  REQUIRE(created.status == 201);
  const std::string id = session_of(created);
  CHECK(created.json()["agent"] == "human");
  CHECK(std::filesystem::exists(m.session_dir(id) / "record.jsonl"));

  const auto obs = m.observation(id).json();
  CHECK(obs["step"] == 0);
  CHECK(obs["status"] == "active");
  CHECK(std::filesystem::exists(m.session_dir(id) / "obs_0000.png"));
  CHECK(m.observation("s999").status == 404);

  CHECK(m.action(id, "{").status == 400);
  CHECK(m.action(id, act("Fly")).status == 400);
  CHECK(m.action("s999", act("Ascend")).status == 404);
  CHECK(m.step(id).status == 400);
  CHECK(m.result(id).status == 409);

  const auto moved = m.action(id, act("MoveForward"));
  CHECK(moved.status == 200);
  CHECK(moved.json()["step"] == 1);
  // The record on disk is current after every action.
  auto disk = agent::EpisodeRecord::load(m.session_dir(id) / "record.jsonl");
  CHECK(disk.ss == 1);
  CHECK(disk.steps.back().action == planner::Action::MoveForward);

  for (const auto& layer : {"semantic", "cognitive", "uncertainty"}) {
    const auto r = m.maps(id, layer);
    CHECK(r.status == 200);
    CHECK(r.json()["layer"] == layer);
  }
  CHECK(m.maps(id, "colour").status == 400);

  CHECK(m.action(id, act("Stop")).json()["status"] == "terminated");
  disk = agent::EpisodeRecord::load(m.session_dir(id) / "record.jsonl");
  CHECK(disk.termination == agent::Termination::Stopped);
  CHECK(m.action(id, act("Ascend")).status == 409);
  const auto res = m.result(id).json();
  CHECK(res["ss"] == 2);
  CHECK(res["success"] == false);
  CHECK(res["tl"] == doctest::Approx(5.0));
}

TEST_CASE("infeasible action returns the feasible set") {
  auto suite = street_suite();
  suite.tasks[0].initial_pose = {{38, 34, 4}, 0, -15};  // facing the shop wall
  SessionManager m(suite, config("server_wall"));
  const std::string id = session_of(m.create(R"({"task_id": "far"})"));
  const auto r = m.action(id, act("MoveForward"));
  CHECK(r.status == 422);
  const auto feas = r.json()["feasible"];
  CHECK(std::find(feas.begin(), feas.end(), "MoveForward") == feas.end());
  CHECK(std::find(feas.begin(), feas.end(), "Stop") != feas.end());
  CHECK(m.observation(id).json()["step"] == 0);
}

TEST_CASE("automated sessions step on request") {
  SessionManager m(street_suite(), config("server_step"));
  const std::string id = session_of(m.create(R"({"task_id": "near", "agent": "prpsearcher", "seed": 4})"));
  const auto r = m.step(id);
  CHECK(r.status == 200);
  CHECK(r.json()["status"] == "terminated");
  CHECK(m.step(id).status == 409);
  const auto res = m.result(id).json();
  CHECK(res["success"] == true);
  CHECK(res["ss"] == 1);

  const std::string fbe = session_of(m.create(R"({"task_id": "far", "agent": "fbe"})"));
  CHECK(m.maps(fbe, "semantic").status == 404);
}

TEST_CASE("replaying an automated episode by hand gives the same metrics") {
  const auto suite = street_suite();
  auto cfg = config("server_replay");
  SessionManager m(suite, cfg);
  for (const auto& task : suite.tasks) {
    for (auto kind : {agent::AgentKind::FBE, agent::AgentKind::RE}) {
      auto ec = cfg.defaults;
      ec.task_id = task.id;
      ec.agent = kind;
      ec.seed = 17;
      const auto automated = agent::run_episode(ec, suite.scene_for(task), task);
      const std::string id = session_of(m.create(json{{"task_id", task.id}}.dump()));
      for (const auto& e : automated.steps)
        REQUIRE(m.action(id, act(std::string(planner::to_string(e.action)))).status == 200);
      auto human = agent::EpisodeRecord::load(m.session_dir(id) / "record.jsonl");
      CHECK(human.termination == automated.termination);
      const auto a = eval::outcome_of(automated, task);
      const auto h = eval::outcome_of(human, task);
      CHECK(a.fs == h.fs);
      CHECK(a.ss == h.ss);
      CHECK(a.tl == h.tl);
      CHECK(a.ne == h.ne);
      const auto res = m.result(id);
      CHECK(res.json()["success"] == a.fs);
    }
  }
}

TEST_CASE("sessions are isolated under concurrent use") {
  SessionManager m(street_suite(), config("server_concurrent"));
  std::vector<std::string> ids;
  for (int k = 0; k < 4; ++k) ids.push_back(session_of(m.create(R"({"task_id": "far"})")));
  std::vector<std::thread> threads;
  std::vector<int> ok(4, 0);
  for (int k = 0; k < 4; ++k)
    threads.emplace_back([&, k] {
      const std::string a = k % 2 ? "MoveLeft" : "TurnLeft45";
      for (int n = 0; n < 3; ++n) ok[static_cast<size_t>(k)] += m.action(ids[static_cast<size_t>(k)], act(a)).status == 200;
    });
  for (auto& t : threads) t.join();
  for (int k = 0; k < 4; ++k) {
    CHECK(ok[static_cast<size_t>(k)] == 3);
    const auto obs = m.observation(ids[static_cast<size_t>(k)]).json();
    CHECK(obs["step"] == 3);
    if (k % 2) CHECK(obs["pose"]["position"][1] == 55.0);
    else CHECK(obs["pose"]["yaw_deg"] == 135.0);
  }
}

TEST_CASE("http front end") {
  SessionManager m(street_suite(), config("server_http"));
  HttpServer http(m);
  const int port = http.bind("127.0.0.1", 0);
  REQUIRE(port > 0);
  std::thread t([&] { http.listen(); });
  httplib::Client cli("127.0.0.1", port);
  cli.set_read_timeout(30, 0);

  auto res = cli.Get("/tasks");
  REQUIRE(res);
  CHECK(res->status == 200);
  res = cli.Post("/episodes", R"({"task_id": "far"})", "application/json");
  REQUIRE(res);
  CHECK(res->status == 201);
  const std::string id = json::parse(res->body)["session_id"];
  res = cli.Get("/episodes/" + id + "/observation");
  REQUIRE(res);
  const std::string image = json::parse(res->body)["image"];
  res = cli.Get(image);
  REQUIRE(res);
  CHECK(res->status == 200);
  CHECK(res->body.substr(1, 3) == "PNG");
  res = cli.Post("/episodes/" + id + "/action", act("Descend"), "application/json");
  REQUIRE(res);
  CHECK(res->status == 200);
  res = cli.Get("/episodes/" + id + "/maps?layer=uncertainty");
  REQUIRE(res);
  CHECK(json::parse(res->body)["layer"] == "uncertainty");
  res = cli.Get("/episodes/" + id + "/result");
  REQUIRE(res);
  CHECK(res->status == 409);
  res = cli.Get("/episodes/nope/observation");
  REQUIRE(res);
  CHECK(res->status == 404);
  http.stop();
  t.join();
}

TEST_CASE("server config from a toml document") {
  const auto doc = Config::parse("[agent]\ntheta = 0.3\nmax_steps = 50\n[server]\nport = 9000\n");
  const auto c = server_config_from(doc);
  CHECK(c.defaults.theta == 0.3);
  CHECK(c.defaults.max_steps == 50);
  CHECK(c.port == 9000);
  CHECK_THROWS_AS(server_config_from(Config::parse("[agent]\ntheta = 3.0\n")), ValidationError);
}
