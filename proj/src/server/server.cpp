#include "avos/server/server.hpp"

#include <fcntl.h>
#include <unistd.h>

#include <cstdio>

#include <httplib.h>

#include "avos/core/image_io.hpp"
#include "avos/sensor/render.hpp"
#include "avos/world/io.hpp"

namespace avos::server {

using nlohmann::json;

namespace {

Response json_response(int status, const json& body) { return {status, "application/json", body.dump()}; }

Response error_response(int status, const std::string& message) {
  return json_response(status, {{"error", message}});
}

json actions_json(const std::vector<planner::Action>& actions) {
  json out = json::array();
  for (auto a : actions) out.push_back(std::string(planner::to_string(a)));
  return out;
}

// Writes `text` to `path` through a temp file, fsync and rename.
void write_durable(const std::filesystem::path& path, const std::string& text) {
  const auto tmp = path.string() + ".tmp";
  const int fd = ::open(tmp.c_str(), O_WRONLY | O_CREAT | O_TRUNC, 0644);
  if (fd < 0) throw Error("cannot open " + tmp);
  size_t off = 0;
  while (off < text.size()) {
    const ssize_t n = ::write(fd, text.data() + off, text.size() - off);
    if (n <= 0) {
      ::close(fd);
      throw Error("cannot write " + tmp);
    }
    off += static_cast<size_t>(n);
  }
  if (::fsync(fd) != 0 || ::close(fd) != 0) throw Error("cannot sync " + tmp);
  std::filesystem::rename(tmp, path);
  const int dir = ::open(path.parent_path().c_str(), O_RDONLY);
  if (dir >= 0) {
    ::fsync(dir);
    ::close(dir);
  }
}

}  // namespace

ServerConfig server_config_from(const Config& doc) {
  ServerConfig c;
  auto& d = c.defaults;
  d.theta = doc.get_double("agent.theta", d.theta);
  d.alpha = doc.get_double("agent.alpha", d.alpha);
  d.actions.step_size = doc.get_double("agent.step_size", d.actions.step_size);
  d.actions.turn_deg = doc.get_double("agent.turn_deg", d.actions.turn_deg);
  d.max_steps = static_cast<int>(doc.get_int("agent.max_steps", d.max_steps));
  d.oracle_mode = doc.get_string("oracle.mode", d.oracle_mode);
  c.host = doc.get_string("server.host", c.host);
  c.port = static_cast<int>(doc.get_int("server.port", c.port));
  c.data_dir = doc.get_string("server.data_dir", c.data_dir.string());
  d.validate();
  return c;
}

struct SessionManager::Session {
  std::string id;
  std::mutex mutex;
  world::Task task;
  std::unique_ptr<oracle::Oracle> oracle;
  std::unique_ptr<agent::Episode> episode;
  int written_step = -1;  // last observation image on disk
};

SessionManager::SessionManager(world::Suite suite, ServerConfig config)
    : suite_(std::move(suite)), config_(std::move(config)) {
  std::filesystem::create_directories(config_.data_dir / "sessions");
}

SessionManager::~SessionManager() = default;

std::filesystem::path SessionManager::session_dir(const std::string& id) const {
  return config_.data_dir / "sessions" / id;
}

std::shared_ptr<SessionManager::Session> SessionManager::find(const std::string& id) {
  std::lock_guard lock(table_mutex_);
  auto it = sessions_.find(id);
  return it == sessions_.end() ? nullptr : it->second;
}

Response SessionManager::tasks() const {
  json out = json::array();
  for (const auto& t : suite_.tasks)
    out.push_back({{"id", t.id},
                   {"difficulty", std::string(world::to_string(t.difficulty))},
                   {"text", t.text}});
  return json_response(200, out);
}

Response SessionManager::create(const std::string& body) {
  json req;
  try {
    req = json::parse(body);
  } catch (const json::exception& e) {
    return error_response(400, std::string("invalid JSON: ") + e.what());
  }
  if (!req.is_object() || !req.contains("task_id") || !req["task_id"].is_string())
    return error_response(400, "task_id (string) is required");
  const std::string task_id = req["task_id"];
  const world::Task* task = nullptr;
  for (const auto& t : suite_.tasks)
    if (t.id == task_id) task = &t;
  if (!task) return error_response(404, "unknown task '" + task_id + "'");

  agent::EpisodeConfig cfg = config_.defaults;
  cfg.task_id = task_id;
  try {
    cfg.agent = agent::agent_kind_from_string(req.value("agent", std::string("human")));
  } catch (const Error& e) {
    return error_response(400, e.what());
  }
  if (req.contains("seed")) {
    if (!req["seed"].is_number_unsigned()) return error_response(400, "seed must be a non-negative integer");
    cfg.seed = req["seed"].get<uint64_t>();
  }

  auto s = std::make_shared<Session>();
  s->id = "s" + std::to_string(++counter_);
  s->task = *task;
  const world::Scene& scene = suite_.scene_for(*task);
  try {
    s->oracle = agent::make_episode_oracle(cfg);
    s->episode = std::make_unique<agent::Episode>(cfg, scene, *task, s->oracle.get());
  } catch (const std::exception& e) {
    return error_response(400, e.what());
  }
  const auto dir = session_dir(s->id);
  std::filesystem::create_directories(dir);
  try {
    sensor::save_target_image(scene, *scene.find(task->target_object_id), cfg.camera,
                              dir / "target.png");
  } catch (const Error&) {
    // Targets without a clear close-up view simply have no image.
  }
  {
    std::lock_guard lock(s->mutex);
    persist(*s);
  }
  {
    std::lock_guard lock(table_mutex_);
    sessions_[s->id] = s;
  }
  return json_response(201, {{"session_id", s->id},
                             {"task_id", task_id},
                             {"agent", std::string(agent::to_string(cfg.agent))},
                             {"target", {{"image", "/sessions/" + s->id + "/target.png"},
                                         {"text", task->text}}}});
}

Response SessionManager::observation_locked(Session& s) {
  const auto& obs = s.episode->observation();
  const int step = s.episode->record().ss;
  char name[32];
  std::snprintf(name, sizeof name, "obs_%04d.png", step);
  if (s.written_step != step) {
    write_png_rgb8(session_dir(s.id) / name, obs.width, obs.height, obs.color);
    s.written_step = step;
  }
  const bool done = s.episode->terminated();
  return json_response(
      200, {{"session_id", s.id},
            {"step", step},
            {"image", "/sessions/" + s.id + "/" + name},
            {"width", obs.width},
            {"height", obs.height},
            {"pose", world::pose_to_json(s.episode->pose())},
            {"feasible", done ? json::array() : actions_json(s.episode->feasible())},
            {"status", done ? "terminated" : "active"},
            {"termination", std::string(agent::to_string(s.episode->record().termination))}});
}

Response SessionManager::observation(const std::string& id) {
  auto s = find(id);
  if (!s) return error_response(404, "unknown session '" + id + "'");
  std::lock_guard lock(s->mutex);
  return observation_locked(*s);
}

void SessionManager::persist(Session& s) {
  write_durable(session_dir(s.id) / "record.jsonl", s.episode->record().to_jsonl());
}

Response SessionManager::action(const std::string& id, const std::string& body) {
  auto s = find(id);
  if (!s) return error_response(404, "unknown session '" + id + "'");
  json req;
  try {
    req = json::parse(body);
  } catch (const json::exception& e) {
    return error_response(400, std::string("invalid JSON: ") + e.what());
  }
  if (!req.is_object() || !req.contains("action") || !req["action"].is_string())
    return error_response(400, "action (string) is required");
  planner::Action a;
  try {
    a = planner::action_from_string(req["action"].get<std::string>());
  } catch (const Error& e) {
    return error_response(400, e.what());
  }
  std::lock_guard lock(s->mutex);
  if (s->episode->terminated()) return error_response(409, "episode already terminated");
  const auto feasible = s->episode->feasible();
  if (std::find(feasible.begin(), feasible.end(), a) == feasible.end())
    return json_response(422, {{"error", "action '" + std::string(planner::to_string(a)) +
                                             "' is not feasible"},
                               {"feasible", actions_json(feasible)}});
  try {
    s->episode->act(a);
  } catch (const InfeasibleActionError& e) {
    return json_response(422, {{"error", e.what()}, {"feasible", actions_json(feasible)}});
  }
  persist(*s);
  return observation_locked(*s);
}

Response SessionManager::step(const std::string& id) {
  auto s = find(id);
  if (!s) return error_response(404, "unknown session '" + id + "'");
  std::lock_guard lock(s->mutex);
  if (s->episode->config().agent == agent::AgentKind::Human)
    return error_response(400, "human sessions advance through /action");
  if (s->episode->terminated()) return error_response(409, "episode already terminated");
  s->episode->step();
  persist(*s);
  return observation_locked(*s);
}

Response SessionManager::maps(const std::string& id, const std::string& layer) {
  auto s = find(id);
  if (!s) return error_response(404, "unknown session '" + id + "'");
  std::lock_guard lock(s->mutex);
  if (!s->episode->has_maps()) return error_response(404, "this agent keeps no maps");
  if (layer == "semantic") return json_response(200, s->episode->semantic().dump());
  if (layer == "cognitive") return json_response(200, s->episode->cognitive().dump());
  if (layer == "uncertainty") return json_response(200, s->episode->uncertainty().dump());
  return error_response(400, "layer must be semantic, cognitive or uncertainty");
}

Response SessionManager::result(const std::string& id) {
  auto s = find(id);
  if (!s) return error_response(404, "unknown session '" + id + "'");
  std::lock_guard lock(s->mutex);
  const auto& r = s->episode->record();
  if (!s->episode->terminated()) return error_response(409, "episode still running");
  const double ne = distance(r.final_pose.position, s->task.target_position);
  const bool fs = r.termination == agent::Termination::Stopped && r.found_target &&
                  ne <= 20.0;
  return json_response(200, {{"session_id", s->id},
                             {"task_id", r.task_id},
                             {"termination", std::string(agent::to_string(r.termination))},
                             {"found_target", r.found_target},
                             {"success", fs},
                             {"ss", r.ss},
                             {"tl", r.tl},
                             {"fp", world::pose_to_json(r.final_pose)},
                             {"distance_to_target", ne},
                             {"record", "/sessions/" + s->id + "/record.jsonl"}});
}

HttpServer::HttpServer(SessionManager& manager)
    : manager_(manager), http_(std::make_unique<httplib::Server>()) {
  auto send = [](httplib::Response& res, const Response& r) {
    res.status = r.status;
    res.set_content(r.body, r.content_type);
  };
  auto& h = *http_;
  h.Post("/episodes", [&, send](const httplib::Request& req, httplib::Response& res) {
    send(res, manager_.create(req.body));
  });
  h.Get("/tasks", [&, send](const httplib::Request&, httplib::Response& res) {
    send(res, manager_.tasks());
  });
  h.Get(R"(/episodes/([^/]+)/observation)",
        [&, send](const httplib::Request& req, httplib::Response& res) {
          send(res, manager_.observation(req.matches[1]));
        });
  h.Post(R"(/episodes/([^/]+)/action)",
         [&, send](const httplib::Request& req, httplib::Response& res) {
           send(res, manager_.action(req.matches[1], req.body));
         });
  h.Post(R"(/episodes/([^/]+)/step)",
         [&, send](const httplib::Request& req, httplib::Response& res) {
           send(res, manager_.step(req.matches[1]));
         });
  h.Get(R"(/episodes/([^/]+)/maps)",
        [&, send](const httplib::Request& req, httplib::Response& res) {
          send(res, manager_.maps(req.matches[1], req.get_param_value("layer")));
        });
  h.Get(R"(/episodes/([^/]+)/result)",
        [&, send](const httplib::Request& req, httplib::Response& res) {
          send(res, manager_.result(req.matches[1]));
        });
  h.set_mount_point("/sessions", (manager_.config().data_dir / "sessions").string());
  h.set_exception_handler([](const httplib::Request&, httplib::Response& res,
                             std::exception_ptr ep) {
    std::string msg = "internal error";
    try {
      std::rethrow_exception(ep);
    } catch (const std::exception& e) {
      msg = e.what();
    } catch (...) {
    }
    res.status = 500;
    res.set_content(json{{"error", msg}}.dump(), "application/json");
  });
}

HttpServer::~HttpServer() = default;

int HttpServer::bind(const std::string& host, int port) {
  const int bound = port == 0 ? http_->bind_to_any_port(host) : (http_->bind_to_port(host, port) ? port : -1);
  if (bound < 0) throw Error("cannot bind " + host + ":" + std::to_string(port));
  return bound;
}

void HttpServer::listen() { http_->listen_after_bind(); }

void HttpServer::stop() { http_->stop(); }

}  // namespace avos::server
