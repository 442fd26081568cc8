#pragma once

#include <atomic>
#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <string>

#include <json.hpp>

#include "avos/agent/episode.hpp"
#include "avos/core/config.hpp"
#include "avos/world/io.hpp"

namespace httplib {
class Server;
}

namespace avos::server {

struct ServerConfig {
  std::filesystem::path data_dir = "avos_sessions";  // session logs and images
  agent::EpisodeConfig defaults;                     // task_id, agent and seed come per request
  std::string host = "127.0.0.1";
  int port = 8080;
};

/// Defaults overridden by an avos.toml document: [agent] theta, alpha,
/// step_size, turn_deg, max_steps; [server] host, port, data_dir;
/// [oracle] mode.
ServerConfig server_config_from(const Config& doc);

struct Response {
  int status = 200;
  std::string content_type = "application/json";
  std::string body;

  nlohmann::json json() const { return nlohmann::json::parse(body); }
};

/// Session table plus transport-independent handlers. Sessions are isolated;
/// calls on one session are serialized by its own mutex.
class SessionManager {
 public:
  SessionManager(world::Suite suite, ServerConfig config);
  ~SessionManager();

  /// body: {task_id, agent?: "human"|"prpsearcher"|"re"|"fbe", seed?}
  Response create(const std::string& body);
  Response observation(const std::string& id);
  /// body: {action}. 422 with the feasible set when infeasible, 409 after
  /// termination. The session record is fsync'd before returning.
  Response action(const std::string& id, const std::string& body);
  /// One decision by the session's own automated agent (not for "human").
  Response step(const std::string& id);
  Response maps(const std::string& id, const std::string& layer);
  Response result(const std::string& id);
  Response tasks() const;

  const ServerConfig& config() const { return config_; }
  std::filesystem::path session_dir(const std::string& id) const;

 private:
  struct Session;
  std::shared_ptr<Session> find(const std::string& id);
  Response observation_locked(Session& s);
  void persist(Session& s);

  world::Suite suite_;
  ServerConfig config_;
  std::mutex table_mutex_;
  std::map<std::string, std::shared_ptr<Session>> sessions_;
  std::atomic<uint64_t> counter_{0};
};

/// httplib front end. Routes:
///   POST /episodes, GET /episodes/{id}/observation, POST /episodes/{id}/action,
///   POST /episodes/{id}/step, GET /episodes/{id}/maps?layer=..,
///   GET /episodes/{id}/result, GET /tasks, static files under /sessions.
class HttpServer {
 public:
  explicit HttpServer(SessionManager& manager);
  ~HttpServer();

  /// Binds and returns the port (an ephemeral one when `port` is 0).
  int bind(const std::string& host, int port);
  /// Blocks until stop().
  void listen();
  void stop();

 private:
  SessionManager& manager_;
  std::unique_ptr<httplib::Server> http_;
};

}  // namespace avos::server
