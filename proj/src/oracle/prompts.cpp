#include <sstream>

#include "avos/oracle/oracle.hpp"

namespace avos::oracle {

std::string related_prompt(const TaskCue& cue) {
  std::ostringstream s;
  s << "You control a camera drone looking for one object in a city block.\n"
    << "Target image: " << cue.image_ref << "\n"
    << "Target description: " << cue.text << "\n\n"
    << "List the object categories that are likely to appear near this target and help locate "
       "it, including the target's own category. Use short lowercase nouns.\n"
    << "Reply with a fenced json block of the form:\n"
    << "```json\n{\"related\": [\"category\", ...]}\n```\n";
  return s.str();
}

std::string attraction_prompt(const TaskCue& cue, const std::set<std::string>& labels) {
  std::ostringstream s;
  s << "You control a camera drone looking for one object in a city block.\n"
    << "Target image: " << cue.image_ref << "\n"
    << "Target description: " << cue.text << "\n\n"
    << "For each category below give a score between 0 and 1 for how strongly seeing it should "
       "pull the drone toward that spot while searching. 1 means the target itself.\n"
    << "Categories:";
  for (const auto& l : labels) s << " " << l;
  s << "\nReply with a fenced json block of the form:\n"
    << "```json\n{\"attraction\": {\"category\": 0.5, ...}}\n```\n";
  return s.str();
}

std::string plan_prompt(const planner::PlanRequest& request, const DecideContext& ctx) {
  std::ostringstream s;
  s << "You control a camera drone looking for one object in a city block.\n"
    << "Target image: " << request.image_ref << "\n"
    << "Target description: " << request.text << "\n";
  if (!ctx.image_path.empty()) s << "Current view: " << ctx.image_path << "\n";
  s << "\nPlanning state (json):\n" << request.to_json().dump(2) << "\n\n";
  if (request.exploitation)
    s << "Long-term guidance: the most attractive mapped region is centred at the exploitation "
         "target; moving there is usually right when its attraction is high.\n";
  if (request.exploration)
    s << "Hint: the exploration action reveals the most unseen space from here.\n";
  s << "Allowed actions:";
  for (auto a : ctx.feasible) s << " " << planner::to_string(a);
  s << "\nChoose Stop only when the target is clearly in view and close.\n"
    << "Reply with a fenced json block of the form:\n"
    << "```json\n{\"action\": \"MoveForward\", \"found_target\": false, \"rationale\": \"...\"}\n```\n";
  return s.str();
}

}  // namespace avos::oracle
