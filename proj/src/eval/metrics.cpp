#include "avos/eval/metrics.hpp"

#include <algorithm>
#include <cstdio>
#include <sstream>

namespace avos::eval {

using nlohmann::json;

bool success(const agent::EpisodeRecord& record, const world::Task& task, double threshold) {
  return record.termination == agent::Termination::Stopped && record.found_target &&
         distance(record.final_pose.position, task.target_position) <= threshold;
}

double shortest_path_length(const world::Task& task) {
  return distance(task.initial_pose.position, task.target_position);
}

Outcome outcome_of(const agent::EpisodeRecord& record, const world::Task& task, double threshold) {
  if (record.task_id != task.id)
    throw Error("record for task '" + record.task_id + "' matched to task '" + task.id + "'");
  Outcome o;
  o.method = record.config.method_name();
  o.task_id = task.id;
  o.difficulty = std::string(world::to_string(task.difficulty));
  o.fs = success(record, task, threshold);
  o.ss = record.ss;
  o.tl = record.tl;
  o.tl_star = shortest_path_length(task);
  o.ne = distance(record.final_pose.position, task.target_position);
  o.n_theta = record.exploration_advice_count;
  return o;
}

MetricRow aggregate(const std::vector<Outcome>& outcomes) {
  if (outcomes.empty()) throw Error("no episodes");
  MetricRow r;
  r.q = static_cast<int>(outcomes.size());
  double fs = 0, ss = 0, spl = 0, ne = 0, nt = 0;
  for (const auto& o : outcomes) {
    if (!(o.tl_star > 0.0)) throw Error("task '" + o.task_id + "' has a zero-length shortest path");
    fs += o.fs ? 1.0 : 0.0;
    ss += o.ss;
    if (o.fs) spl += o.tl_star / std::max(o.tl, o.tl_star);
    ne += o.ne;
    nt += o.n_theta;
  }
  const double q = r.q;
  r.sr = 100.0 * fs / q;
  r.mss = ss / q;
  r.spl = 100.0 * spl / q;
  r.ne = ne / q;
  r.n_theta = nt / q;
  return r;
}

const MethodResult& SuiteResult::method(const std::string& name) const {
  for (const auto& m : methods)
    if (m.method == name) return m;
  throw Error("no results for method '" + name + "'");
}

SuiteResult metrics_from_outcomes(const std::vector<Outcome>& outcomes) {
  if (outcomes.empty()) throw Error("no episodes");
  std::map<std::string, std::map<std::string, std::vector<Outcome>>> groups;
  std::map<std::string, std::vector<Outcome>> all;
  for (const auto& o : outcomes) {
    groups[o.method][o.difficulty].push_back(o);
    all[o.method].push_back(o);
  }
  SuiteResult res;
  for (const auto& [method, by] : groups) {
    MethodResult m;
    m.method = method;
    for (const auto& [d, list] : by) m.by_difficulty[d] = aggregate(list);
    m.total = aggregate(all[method]);
    res.methods.push_back(std::move(m));
  }
  return res;
}

SuiteResult metrics(const std::vector<agent::EpisodeRecord>& records,
                    const std::map<std::string, world::Task>& tasks, double threshold) {
  std::vector<Outcome> outcomes;
  for (const auto& r : records) {
    auto it = tasks.find(r.task_id);
    if (it == tasks.end()) throw Error("record references unknown task '" + r.task_id + "'");
    outcomes.push_back(outcome_of(r, it->second, threshold));
  }
  return metrics_from_outcomes(outcomes);
}

ReportFormat report_format_from_string(const std::string& s) {
  if (s == "text" || s == "table") return ReportFormat::Text;
  if (s == "csv") return ReportFormat::Csv;
  if (s == "json") return ReportFormat::Json;
  throw ParseError("unknown report format '" + s + "'");
}

namespace {

const std::vector<std::string> kDifficulties{"easy", "medium", "hard"};

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

json row_json(const MetricRow& r) {
  return json{{"q", r.q}, {"SR", r.sr}, {"MSS", r.mss}, {"SPL", r.spl}, {"NE", r.ne}, {"NT", r.n_theta}};
}

MetricRow row_from(const json& j) {
  MetricRow r;
  r.q = j.at("q").get<int>();
  r.sr = j.at("SR").get<double>();
  r.mss = j.at("MSS").get<double>();
  r.spl = j.at("SPL").get<double>();
  r.ne = j.at("NE").get<double>();
  r.n_theta = j.at("NT").get<double>();
  return r;
}

std::string text_table(const SuiteResult& res) {
  std::ostringstream s;
  char buf[256];
  std::snprintf(buf, sizeof buf, "%-24s", "method");
  s << buf;
  for (const auto& d : {"easy", "medium", "hard", "total"}) {
    std::snprintf(buf, sizeof buf, " | %-6s %6s %6s %6s %7s", d, "SR", "MSS", "SPL", "NE");
    s << buf;
  }
  s << " | NT\n";
  for (const auto& m : res.methods) {
    std::snprintf(buf, sizeof buf, "%-24s", m.method.c_str());
    s << buf;
    for (const auto& d : kDifficulties) {
      auto it = m.by_difficulty.find(d);
      if (it == m.by_difficulty.end()) {
        std::snprintf(buf, sizeof buf, " | %-6s %6s %6s %6s %7s", "", "-", "-", "-", "-");
      } else {
        const auto& r = it->second;
        std::snprintf(buf, sizeof buf, " | q=%-4d %6.2f %6.2f %6.2f %7.2f", r.q, r.sr, r.mss, r.spl, r.ne);
      }
      s << buf;
    }
    const auto& t = m.total;
    std::snprintf(buf, sizeof buf, " | q=%-4d %6.2f %6.2f %6.2f %7.2f | %.2f\n", t.q, t.sr, t.mss, t.spl,
                  t.ne, t.n_theta);
    s << buf;
  }
  return s.str();
}

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : line) {
    if (c == sep) {
      out.push_back(cur);
      cur.clear();
    } else if (c != '\r') {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

}  // namespace

json to_json(const SuiteResult& result) {
  json methods = json::array();
  for (const auto& m : result.methods) {
    json by = json::object();
    for (const auto& [d, r] : m.by_difficulty) by[d] = row_json(r);
    methods.push_back({{"method", m.method}, {"by_difficulty", by}, {"total", row_json(m.total)}});
  }
  return json{{"format_version", 1}, {"columns", {"SR", "MSS", "SPL", "NE", "NT"}}, {"methods", methods}};
}

SuiteResult from_json(const json& doc) {
  try {
    SuiteResult res;
    for (const auto& m : doc.at("methods")) {
      MethodResult mr;
      mr.method = m.at("method").get<std::string>();
      for (const auto& [d, r] : m.at("by_difficulty").items()) mr.by_difficulty[d] = row_from(r);
      mr.total = row_from(m.at("total"));
      res.methods.push_back(std::move(mr));
    }
    return res;
  } catch (const json::exception& e) {
    throw ParseError(std::string("suite result: ") + e.what());
  }
}

std::string report(const SuiteResult& result, ReportFormat format) {
  if (result.methods.empty()) throw Error("no episodes");
  switch (format) {
    case ReportFormat::Text:
      return text_table(result);
    case ReportFormat::Json:
      return to_json(result).dump(2) + "\n";
    case ReportFormat::Csv: {
      std::string out = "method,difficulty,q,SR,MSS,SPL,NE,NT\n";
      const auto line = [&](const std::string& m, const std::string& d, const MetricRow& r) {
        out += m + "," + d + "," + std::to_string(r.q) + "," + num(r.sr) + "," + num(r.mss) + "," +
               num(r.spl) + "," + num(r.ne) + "," + num(r.n_theta) + "\n";
      };
      for (const auto& m : result.methods) {
        if (m.method.find(',') != std::string::npos) throw Error("method names may not contain commas");
        for (const auto& [d, r] : m.by_difficulty) line(m.method, d, r);
        line(m.method, "total", m.total);
      }
      return out;
    }
  }
  return {};
}

SuiteResult parse_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) || split(line, ',').size() != 8) throw ParseError("csv: bad header");
  SuiteResult res;
  std::map<std::string, MethodResult> by;
  std::vector<std::string> order;
  int n = 1;
  while (std::getline(in, line)) {
    ++n;
    if (line.empty()) continue;
    const auto f = split(line, ',');
    if (f.size() != 8) throw ParseError("csv line " + std::to_string(n) + ": expected 8 fields");
    MetricRow r;
    try {
      r.q = std::stoi(f[2]);
      r.sr = std::stod(f[3]);
      r.mss = std::stod(f[4]);
      r.spl = std::stod(f[5]);
      r.ne = std::stod(f[6]);
      r.n_theta = std::stod(f[7]);
    } catch (const std::exception&) {
      throw ParseError("csv line " + std::to_string(n) + ": bad number");
    }
    if (!by.count(f[0])) order.push_back(f[0]);
    auto& m = by[f[0]];
    m.method = f[0];
    if (f[1] == "total")
      m.total = r;
    else
      m.by_difficulty[f[1]] = r;
  }
  for (const auto& name : order) res.methods.push_back(by[name]);
  return res;
}

}  // namespace avos::eval
