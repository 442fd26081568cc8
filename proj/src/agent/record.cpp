#include <cstdio>
#include <fstream>
#include <sstream>

#include "avos/agent/episode.hpp"
#include "avos/world/io.hpp"

namespace avos::agent {

using nlohmann::json;

namespace {

std::string hex64(uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

uint64_t parse_hex64(const std::string& s) { return std::stoull(s, nullptr, 16); }

}  // namespace

std::string EpisodeRecord::to_jsonl() const {
  std::string out;
  json header{{"type", "header"},
              {"format_version", kRecordFormatVersion},
              {"config", config.to_json()},
              {"task_id", task_id},
              {"scene_id", scene_id},
              {"difficulty", difficulty},
              {"related", related},
              {"attraction", attraction}};
  out += header.dump() + "\n";
  for (const auto& s : steps) {
    json line{{"type", "step"},
              {"step", s.step},
              {"pose", world::pose_to_json(s.pose)},
              {"action", std::string(planner::to_string(s.action))},
              {"next_pose", world::pose_to_json(s.next_pose)},
              {"found_target", s.found_target},
              {"exploration_included", s.exploration_included},
              {"plan_request", s.plan_request},
              {"oracle", s.oracle},
              {"digests",
               {{"semantic", hex64(s.semantic_digest)},
                {"cognitive", hex64(s.cognitive_digest)},
                {"uncertainty", hex64(s.uncertainty_digest)}}},
              {"mean_uncertainty", s.mean_uncertainty},
              {"recognized", s.recognized}};
    out += line.dump() + "\n";
  }
  json footer{{"type", "footer"},
              {"termination", std::string(to_string(termination))},
              {"found_target", found_target},
              {"final_pose", world::pose_to_json(final_pose)},
              {"ss", ss},
              {"tl", tl},
              {"exploration_advice_count", exploration_advice_count},
              {"error", error}};
  out += footer.dump() + "\n";
  return out;
}

EpisodeRecord EpisodeRecord::from_jsonl(const std::string& text) {
  EpisodeRecord r;
  std::istringstream in(text);
  std::string line;
  bool header = false, footer = false;
  int n = 0;
  try {
    while (std::getline(in, line)) {
      ++n;
      if (line.empty()) continue;
      const json j = json::parse(line);
      const auto type = j.at("type").get<std::string>();
      if (type == "header") {
        if (j.at("format_version").get<int>() != kRecordFormatVersion)
          throw ParseError("unsupported record format_version");
        r.config = EpisodeConfig::from_json(j.at("config"));
        r.task_id = j.at("task_id").get<std::string>();
        r.scene_id = j.at("scene_id").get<std::string>();
        r.difficulty = j.at("difficulty").get<std::string>();
        r.related = j.at("related").get<std::vector<std::string>>();
        r.attraction = j.at("attraction");
        header = true;
      } else if (type == "step") {
        StepEntry s;
        s.step = j.at("step").get<int>();
        s.pose = world::pose_from_json(j.at("pose"), "pose");
        s.action = planner::action_from_string(j.at("action").get<std::string>());
        s.next_pose = world::pose_from_json(j.at("next_pose"), "next_pose");
        s.found_target = j.at("found_target").get<bool>();
        s.exploration_included = j.at("exploration_included").get<bool>();
        s.plan_request = j.at("plan_request");
        s.oracle = j.at("oracle");
        s.semantic_digest = parse_hex64(j.at("digests").at("semantic").get<std::string>());
        s.cognitive_digest = parse_hex64(j.at("digests").at("cognitive").get<std::string>());
        s.uncertainty_digest = parse_hex64(j.at("digests").at("uncertainty").get<std::string>());
        s.mean_uncertainty = j.at("mean_uncertainty").get<double>();
        s.recognized = j.at("recognized").get<int>();
        r.steps.push_back(std::move(s));
      } else if (type == "footer") {
        r.termination = termination_from_string(j.at("termination").get<std::string>());
        r.found_target = j.at("found_target").get<bool>();
        r.final_pose = world::pose_from_json(j.at("final_pose"), "final_pose");
        r.ss = j.at("ss").get<int>();
        r.tl = j.at("tl").get<double>();
        r.exploration_advice_count = j.at("exploration_advice_count").get<int>();
        r.error = j.at("error").get<std::string>();
        footer = true;
      } else {
        throw ParseError("unknown record line type '" + type + "'");
      }
    }
  } catch (const json::exception& e) {
    throw ParseError("record line " + std::to_string(n) + ": " + e.what());
  } catch (const std::invalid_argument&) {
    throw ParseError("record line " + std::to_string(n) + ": bad digest");
  }
  if (!header || !footer) throw ParseError("record is missing its header or footer line");
  return r;
}

void EpisodeRecord::save(const std::filesystem::path& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  out << to_jsonl();
  if (!out) throw Error("write failed for " + path.string());
}

EpisodeRecord EpisodeRecord::load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot read " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return from_jsonl(ss.str());
}

}  // namespace avos::agent
