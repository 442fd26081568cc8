#include <chrono>
#include <cmath>
#include <cstdlib>
#include <iostream>
#include <regex>
#include <thread>

#include <httplib.h>

#include "avos/oracle/oracle.hpp"

namespace avos::oracle {

using nlohmann::json;

std::optional<json> extract_fenced_json(const std::string& text) {
  static const std::regex fence("```(?:json)?[ \\t]*\\r?\\n([\\s\\S]*?)```");
  std::smatch m;
  if (!std::regex_search(text, m, fence)) return std::nullopt;
  try {
    return json::parse(m[1].str());
  } catch (const json::exception&) {
    return std::nullopt;
  }
}

RemoteOracle::RemoteOracle(RemoteConfig config, std::unique_ptr<ScriptedOracle> fallback)
    : config_(std::move(config)), fallback_(std::move(fallback)) {
  if (!fallback_) fallback_ = std::make_unique<ScriptedOracle>();
  if (config_.endpoint.empty()) throw Error("remote oracle needs ORACLE_ENDPOINT");
}

namespace {

struct Endpoint {
  std::string origin;  // scheme://host:port
  std::string path;
};

Endpoint split_endpoint(const std::string& url) {
  static const std::regex re("^(https?://[^/]+)(/.*)?$");
  std::smatch m;
  if (!std::regex_match(url, m, re)) throw Error("malformed oracle endpoint '" + url + "'");
  return {m[1].str(), m[2].matched ? m[2].str() : "/"};
}

}  // namespace

std::string RemoteOracle::complete(const std::string& prompt) {
  const Endpoint ep = split_endpoint(config_.endpoint);
  const json body = {{"model", config_.model},
                     {"temperature", 0},
                     {"messages", json::array({{{"role", "user"}, {"content", prompt}}})}};
  httplib::Headers headers;
  if (!config_.key.empty()) headers.emplace("Authorization", "Bearer " + config_.key);
  std::string last_error = "no attempt made";
  int backoff = config_.backoff_ms;
  for (int attempt = 0; attempt < config_.attempts; ++attempt) {
    if (attempt > 0) {
      std::this_thread::sleep_for(std::chrono::milliseconds(backoff));
      backoff *= 2;
    }
    httplib::Client cli(ep.origin);
    const auto secs = config_.timeout_ms / 1000;
    const auto usecs = (config_.timeout_ms % 1000) * 1000;
    cli.set_connection_timeout(secs, usecs);
    cli.set_read_timeout(secs, usecs);
    cli.set_write_timeout(secs, usecs);
    auto res = cli.Post(ep.path, headers, body.dump(), "application/json");
    if (!res) {
      last_error = httplib::to_string(res.error());
      continue;
    }
    if (res->status != 200) {
      last_error = "HTTP " + std::to_string(res->status);
      continue;
    }
    try {
      const json reply = json::parse(res->body);
      std::string content = reply.at("choices").at(0).at("message").at("content").get<std::string>();
      exchanges_.push_back({{"prompt", prompt}, {"reply", content}});
      return content;
    } catch (const json::exception& e) {
      // A well-formed HTTP reply that is not chat-shaped is a content problem,
      // not a transport one.
      exchanges_.push_back({{"prompt", prompt}, {"reply", res->body}});
      return res->body;
    }
  }
  throw OracleFailure("oracle transport failed after " + std::to_string(config_.attempts) +
                      " attempts: " + last_error);
}

std::set<std::string> RemoteOracle::related_semantics(const TaskCue& cue) {
  const auto content = complete(related_prompt(cue));
  const auto doc = extract_fenced_json(content);
  std::set<std::string> out;
  if (doc && doc->is_object() && doc->contains("related") && (*doc)["related"].is_array()) {
    for (const auto& v : (*doc)["related"])
      if (v.is_string() && !v.get<std::string>().empty()) out.insert(v.get<std::string>());
  }
  if (out.empty()) {
    warnings_.push_back("related: invalid reply, scripted fallback");
    return fallback_->related_semantics(cue);
  }
  out.insert(cue.category);
  out.erase(std::string(kUnknownLabel));
  out.erase(std::string(kIgnoredLabel));
  return out;
}

mapping::AttractionTable RemoteOracle::attraction_scores(const TaskCue& cue,
                                                         const std::set<std::string>& labels) {
  const auto content = complete(attraction_prompt(cue, labels));
  const auto doc = extract_fenced_json(content);
  if (!doc || !doc->is_object() || !doc->contains("attraction") || !(*doc)["attraction"].is_object()) {
    warnings_.push_back("attraction: invalid reply, scripted fallback");
    return fallback_->attraction_scores(cue, labels);
  }
  mapping::AttractionTable table;
  for (const auto& label : labels) {
    const auto& a = (*doc)["attraction"];
    if (!a.contains(label) || !a[label].is_number()) continue;
    double v = a[label].get<double>();
    if (!std::isfinite(v)) continue;
    if (v < 0.0 || v > 1.0) {
      warnings_.push_back("attraction: " + label + " = " + std::to_string(v) + " clamped to [0, 1]");
      v = std::clamp(v, 0.0, 1.0);
    }
    table.set(label, v);
  }
  return table;
}

Decision RemoteOracle::decide(const planner::PlanRequest& request, const DecideContext& ctx) {
  const auto prompt = plan_prompt(request, ctx);
  const auto content = complete(prompt);
  const auto doc = extract_fenced_json(content);
  try {
    if (!doc || !doc->is_object()) throw ParseError("no fenced json block");
    const auto action = planner::action_from_string(doc->at("action").get<std::string>());
    if (std::find(ctx.feasible.begin(), ctx.feasible.end(), action) == ctx.feasible.end())
      throw ParseError("action not in the feasible set");
    Decision d;
    d.action = action;
    d.found_target = doc->value("found_target", false) && action == planner::Action::Stop;
    d.rationale = doc->value("rationale", std::string());
    d.exchange = {{"oracle", "remote"}, {"prompt", prompt}, {"reply", content}};
    return d;
  } catch (const std::exception& e) {
    warnings_.push_back(std::string("plan: ") + e.what() + ", scripted fallback");
    Decision d = fallback_->decide(request, ctx);
    d.fallback = true;
    d.exchange = {{"oracle", "remote"}, {"prompt", prompt}, {"reply", content}, {"fallback", d.exchange}};
    return d;
  }
}

RemoteConfig remote_config_from_env() {
  RemoteConfig c;
  if (const char* v = std::getenv("ORACLE_ENDPOINT")) c.endpoint = v;
  if (const char* v = std::getenv("ORACLE_KEY")) c.key = v;
  if (const char* v = std::getenv("ORACLE_MODEL")) c.model = v;
  if (const char* v = std::getenv("ORACLE_TIMEOUT_MS")) c.timeout_ms = std::atoi(v);
  if (c.timeout_ms <= 0) c.timeout_ms = 30000;
  return c;
}

std::unique_ptr<Oracle> make_oracle(const std::string& mode, const ScriptedParams& params) {
  std::string m = mode;
  if (m.empty()) {
    const char* v = std::getenv("ORACLE_MODE");
    m = v ? v : "scripted";
  }
  if (m == "scripted") return std::make_unique<ScriptedOracle>(KnowledgeBase::defaults(), params);
  if (m == "remote")
    return std::make_unique<RemoteOracle>(
        remote_config_from_env(), std::make_unique<ScriptedOracle>(KnowledgeBase::defaults(), params));
  throw Error("unknown oracle mode '" + m + "'");
}

}  // namespace avos::oracle
