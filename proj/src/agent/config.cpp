#include "avos/agent/episode.hpp"

namespace avos::agent {

using nlohmann::json;

std::string_view to_string(AgentKind k) {
  switch (k) {
    case AgentKind::PRPSearcher:
      return "prpsearcher";
    case AgentKind::RE:
      return "re";
    case AgentKind::FBE:
      return "fbe";
    case AgentKind::Human:
      return "human";
  }
  return "prpsearcher";
}

AgentKind agent_kind_from_string(std::string_view s) {
  for (AgentKind k : {AgentKind::PRPSearcher, AgentKind::RE, AgentKind::FBE, AgentKind::Human})
    if (to_string(k) == s) return k;
  throw ParseError("unknown agent '" + std::string(s) + "'");
}

std::string_view to_string(Termination t) {
  switch (t) {
    case Termination::Running:
      return "Running";
    case Termination::Stopped:
      return "Stopped";
    case Termination::StepLimit:
      return "StepLimit";
    case Termination::DeadEnd:
      return "DeadEnd";
    case Termination::OracleFailure:
      return "OracleFailure";
  }
  return "Running";
}

Termination termination_from_string(std::string_view s) {
  for (Termination t : {Termination::Running, Termination::Stopped, Termination::StepLimit,
                        Termination::DeadEnd, Termination::OracleFailure})
    if (to_string(t) == s) return t;
  throw ParseError("unknown termination '" + std::string(s) + "'");
}

std::string EpisodeConfig::method_name() const {
  return method.empty() ? std::string(to_string(agent)) : method;
}

void EpisodeConfig::validate() const {
  std::vector<Violation> v;
  if (max_steps <= 0) v.push_back({"max_steps", "must be > 0"});
  if (!(theta >= 0.0 && theta <= 1.0)) v.push_back({"theta", "must be in [0, 1]"});
  if (!(alpha >= 0.0) || !std::isfinite(alpha)) v.push_back({"alpha", "must be >= 0"});
  if (!(actions.step_size > 0.0)) v.push_back({"step_size", "must be > 0"});
  if (!(actions.turn_deg > 0.0 && actions.turn_deg < 360.0)) v.push_back({"turn_deg", "must be in (0, 360)"});
  if (!(cell_size > 0.0)) v.push_back({"cell_size", "must be > 0"});
  if (!(dbscan.eps > 0.0) || dbscan.min_pts < 1) v.push_back({"dbscan", "eps > 0 and min_pts >= 1"});
  if (!(p_noise >= 0.0 && p_noise <= 1.0)) v.push_back({"p_noise", "must be in [0, 1]"});
  if (!(identification.kappa > 0.0 && identification.kappa <= 1.0))
    v.push_back({"identification.kappa", "must be in (0, 1]"});
  if (!(identification.d_id > 0.0)) v.push_back({"identification.d_id", "must be > 0"});
  for (auto& c : camera.validate()) v.push_back(c);
  if (!v.empty()) throw ValidationError(std::move(v));
}

json EpisodeConfig::to_json() const {
  return json{{"task_id", task_id},
              {"agent", std::string(to_string(agent))},
              {"method", method_name()},
              {"max_steps", max_steps},
              {"theta", theta},
              {"alpha", alpha},
              {"step_size", actions.step_size},
              {"turn_deg", actions.turn_deg},
              {"seed", seed},
              {"oracle_mode", oracle_mode},
              {"camera",
               {{"width", camera.width},
                {"height", camera.height},
                {"fx", camera.fx},
                {"fy", camera.fy},
                {"cx", camera.cx},
                {"cy", camera.cy},
                {"max_range", camera.max_range}}},
              {"cell_size", cell_size},
              {"dbscan", {{"eps", dbscan.eps}, {"min_pts", dbscan.min_pts}}},
              {"p_noise", p_noise},
              {"cumulative_counts", cumulative_counts},
              {"ground_truth_occlusion", ground_truth_occlusion},
              {"use_exploration", use_exploration},
              {"use_exploitation", use_exploitation},
              {"attraction_as_probability", attraction_as_probability},
              {"identification", {{"kappa", identification.kappa}, {"d_id", identification.d_id}}},
              {"fbe_vertical_prob", fbe_vertical_prob}};
}

EpisodeConfig EpisodeConfig::from_json(const json& j) {
  try {
    EpisodeConfig c;
    c.task_id = j.at("task_id").get<std::string>();
    c.agent = agent_kind_from_string(j.at("agent").get<std::string>());
    c.method = j.value("method", std::string());
    if (c.method == to_string(c.agent)) c.method.clear();
    c.max_steps = j.at("max_steps").get<int>();
    c.theta = j.at("theta").get<double>();
    c.alpha = j.at("alpha").get<double>();
    c.actions.step_size = j.at("step_size").get<double>();
    c.actions.turn_deg = j.at("turn_deg").get<double>();
    c.seed = j.at("seed").get<uint64_t>();
    c.oracle_mode = j.at("oracle_mode").get<std::string>();
    const auto& cam = j.at("camera");
    c.camera.width = cam.at("width").get<int>();
    c.camera.height = cam.at("height").get<int>();
    c.camera.fx = cam.at("fx").get<double>();
    c.camera.fy = cam.at("fy").get<double>();
    c.camera.cx = cam.at("cx").get<double>();
    c.camera.cy = cam.at("cy").get<double>();
    c.camera.max_range = cam.at("max_range").get<double>();
    c.cell_size = j.at("cell_size").get<double>();
    c.dbscan.eps = j.at("dbscan").at("eps").get<double>();
    c.dbscan.min_pts = j.at("dbscan").at("min_pts").get<int>();
    c.p_noise = j.at("p_noise").get<double>();
    c.cumulative_counts = j.at("cumulative_counts").get<bool>();
    c.ground_truth_occlusion = j.at("ground_truth_occlusion").get<bool>();
    c.use_exploration = j.at("use_exploration").get<bool>();
    c.use_exploitation = j.at("use_exploitation").get<bool>();
    c.attraction_as_probability = j.at("attraction_as_probability").get<bool>();
    c.identification.kappa = j.at("identification").at("kappa").get<double>();
    c.identification.d_id = j.at("identification").at("d_id").get<double>();
    c.fbe_vertical_prob = j.at("fbe_vertical_prob").get<double>();
    return c;
  } catch (const json::exception& e) {
    throw ParseError(std::string("episode config: ") + e.what());
  }
}

}  // namespace avos::agent
