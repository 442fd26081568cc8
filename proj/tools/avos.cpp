#include <csignal>
#include <cstdio>
#include <iostream>

#include <CLI11.hpp>

#include "avos/eval/suite.hpp"
#include "avos/server/server.hpp"

using namespace avos;

namespace {

server::HttpServer* g_http = nullptr;

void on_signal(int) {
  if (g_http) g_http->stop();
}

server::ServerConfig load_defaults(const std::string& path) {
  if (path.empty()) return {};
  return server::server_config_from(Config::load(path));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Aerial visual object search: scene generation, suites, evaluation, server"};
  app.require_subcommand(1);
  std::string config_path;
  app.add_option("--config", config_path, "avos.toml with [agent], [server] and [oracle] defaults")
      ->check(CLI::ExistingFile);

  // gen-scenes
  auto* gen = app.add_subcommand("gen-scenes", "Generate the synthetic benchmark");
  uint64_t gen_seed = 1;
  int per_difficulty = 20;
  std::string gen_out;
  gen->add_option("--seed", gen_seed, "Generator seed")->capture_default_str();
  gen->add_option("--per-difficulty", per_difficulty, "Tasks per difficulty class")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  gen->add_option("--out", gen_out, "Output directory")->required();

  // run-suite
  auto* run = app.add_subcommand("run-suite", "Run seeded episodes over a task file");
  std::string tasks_path, agent_name = "prpsearcher", run_out, method;
  int episodes = -1;
  uint64_t run_seed = 0;
  double theta = -1.0;
  bool no_exploration = false, no_exploitation = false;
  run->add_option("--tasks", tasks_path, "tasks.json from gen-scenes")->required()->check(CLI::ExistingFile);
  run->add_option("--agent", agent_name, "prpsearcher, re or fbe")->capture_default_str();
  run->add_option("--episodes", episodes, "Episode count (default: one per task)");
  run->add_option("--seed", run_seed, "Suite seed")->capture_default_str();
  run->add_option("--out", run_out, "Output directory for records and suite_result.json")->required();
  run->add_option("--theta", theta, "Exploration gate threshold (default from config, 0.1)");
  run->add_option("--method", method, "Method label in results (default: agent name)");
  run->add_flag("--no-exploration", no_exploration, "Never pass exploration advice");
  run->add_flag("--no-exploitation", no_exploitation, "Never pass exploitation advice");

  // eval
  auto* ev = app.add_subcommand("eval", "Aggregate episode records into SR, MSS, SPL, NE");
  std::string records_dir, eval_tasks, format = "text";
  ev->add_option("--records", records_dir, "Directory of *.jsonl records (searched recursively)")
      ->required()
      ->check(CLI::ExistingDirectory);
  ev->add_option("--tasks", eval_tasks, "tasks.json the records refer to")->required()->check(CLI::ExistingFile);
  ev->add_option("--format", format, "text, csv or json")->capture_default_str();

  // serve
  auto* serve = app.add_subcommand("serve", "Serve the episode HTTP API");
  std::string serve_tasks, host, data_dir;
  int port = -1;
  serve->add_option("--tasks", serve_tasks, "tasks.json to serve")->required()->check(CLI::ExistingFile);
  serve->add_option("--host", host, "Bind address (default 127.0.0.1)");
  serve->add_option("--port", port, "Port; 0 picks a free one (default 8080)");
  serve->add_option("--data-dir", data_dir, "Session logs and images (default avos_sessions)");

  CLI11_PARSE(app, argc, argv);

  try {
    auto defaults = load_defaults(config_path);

    if (*gen) {
      world::BenchmarkParams params;
      params.per_difficulty = per_difficulty;
      const auto bench = world::build_benchmark(gen_seed, params);
      eval::write_benchmark(bench, gen_out, defaults.defaults.camera);
      std::printf("%zu scenes, %zu tasks written to %s\n", bench.scenes.size(), bench.tasks.size(),
                  gen_out.c_str());
      return 0;
    }

    if (*run) {
      const auto suite = world::load_suite(tasks_path);
      eval::SuiteRunOptions opt;
      opt.base = defaults.defaults;
      opt.base.agent = agent::agent_kind_from_string(agent_name);
      if (opt.base.agent == agent::AgentKind::Human) throw Error("human agents play through `serve`");
      if (theta >= 0.0) opt.base.theta = theta;
      opt.base.use_exploration = !no_exploration;
      opt.base.use_exploitation = !no_exploitation;
      opt.base.method = method;
      opt.episodes = episodes;
      opt.seed = run_seed;
      opt.out = run_out;
      const auto result = eval::run_suite(suite, opt);
      for (const auto& e : result.errors) std::fprintf(stderr, "episode error: %s\n", e.c_str());
      if (!result.records.empty() && result.errors.size() < result.records.size())
        std::cout << eval::report(result.result, eval::ReportFormat::Text);
      return result.errors.empty() ? 0 : 1;
    }

    if (*ev) {
      const auto tasks_file = world::load_tasks(eval_tasks);
      std::map<std::string, world::Task> tasks;
      for (const auto& t : tasks_file.tasks) tasks.emplace(t.id, t);
      const auto records = eval::load_records(records_dir);
      const auto result = eval::metrics(records, tasks);
      std::cout << eval::report(result, eval::report_format_from_string(format));
      return 0;
    }

    if (*serve) {
      if (!host.empty()) defaults.host = host;
      if (port >= 0) defaults.port = port;
      if (!data_dir.empty()) defaults.data_dir = data_dir;
      server::SessionManager manager(world::load_suite(serve_tasks), defaults);
      server::HttpServer http(manager);
      const int bound = http.bind(defaults.host, defaults.port);
      std::printf("listening on %s:%d\n", defaults.host.c_str(), bound);
      std::fflush(stdout);
      g_http = &http;
      std::signal(SIGINT, on_signal);
      std::signal(SIGTERM, on_signal);
      http.listen();
      g_http = nullptr;
      return 0;
    }
  } catch (const ValidationError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
