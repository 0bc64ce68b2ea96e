#include "roadrisk/scenario/json.hpp"

#include "roadrisk/io/model_io.hpp"

namespace roadrisk {
namespace {

using nlohmann::json;

json model_json(const std::string& name, const std::string& hash) {
  return json{{"name", name}, {"hash", hash}};
}

json optional_number(const std::optional<double>& p) { return p ? json(*p) : json(nullptr); }

std::string string_field(const json& j, const char* key, const std::string& where) {
  if (!j.contains(key) || !j.at(key).is_string()) {
    throw SpecError(where + ": expected string field '" + key + "'");
  }
  return j.at(key).get<std::string>();
}

TargetState target_from_json(const json& j) {
  if (j.is_string()) {
    const auto text = j.get<std::string>();
    const auto eq = text.find('=');
    if (eq == std::string::npos || eq == 0 || eq + 1 == text.size()) {
      throw SpecError("target: expected node=state");
    }
    return {text.substr(0, eq), text.substr(eq + 1)};
  }
  if (!j.is_object()) throw SpecError("target: expected an object or node=state");
  return {string_field(j, "node", "target"), string_field(j, "state", "target")};
}

}  // namespace

std::string render_json(const json& j) { return j.dump(2) + "\n"; }

json to_json(const PosteriorReport& report) {
  json posteriors = json::array();
  for (const auto& d : report.distributions) {
    std::vector<double> p(d.probabilities.data(), d.probabilities.data() + d.probabilities.size());
    posteriors.push_back({{"node", d.node},
                          {"states", d.states},
                          {"probabilities", p},
                          {"observed", report.evidence.contains(d.node)}});
  }
  return json{{"scenario", report.scenario_id},
              {"evidence", io::evidence_to_json(report.evidence)},
              {"engine", std::string(to_string(report.engine))},
              {"model", model_json(report.model_name, report.model_hash)},
              {"posteriors", std::move(posteriors)}};
}

json to_json(const SweepTable& table) {
  json axes = json::array();
  for (const auto& a : table.axes) axes.push_back({{"node", a.node}, {"states", a.states}});
  json cells = json::array();
  for (const auto& c : table.cells) {
    json assignment = json::object();
    for (std::size_t k = 0; k < table.axes.size(); ++k) assignment[table.axes[k].node] = c.assignment[k];
    json cell{{"assignment", std::move(assignment)}, {"probability", optional_number(c.probability)}};
    if (!c.error.empty()) cell["error"] = c.error;
    cells.push_back(std::move(cell));
  }
  return json{{"target", {{"node", table.target.node}, {"state", table.target.state}}},
              {"axes", std::move(axes)},
              {"fixed", io::evidence_to_json(table.fixed)},
              {"model", model_json(table.model_name, table.model_hash)},
              {"cells", std::move(cells)}};
}

json to_json(const GapSummary& gap) {
  json rows = json::array();
  for (const auto& r : gap.rows) {
    json row{{"condition", r.condition},
             {"worse", optional_number(r.worse)},
             {"better", optional_number(r.better)},
             {"gap", optional_number(r.gap)}};
    if (!r.error.empty()) row["error"] = r.error;
    rows.push_back(std::move(row));
  }
  return json{{"target", {{"node", gap.target.node}, {"state", gap.target.state}}},
              {"contrast",
               {{"node", gap.contrast.node}, {"worse", gap.contrast.worse}, {"better", gap.contrast.better}}},
              {"conditioning", {{"node", gap.conditioning.node}, {"states", gap.conditioning.states}}},
              {"fixed", io::evidence_to_json(gap.fixed)},
              {"model", model_json(gap.model_name, gap.model_hash)},
              {"rows", std::move(rows)},
              {"mean_gap", optional_number(gap.mean_gap)}};
}

bbn::Evidence evidence_from_json(const json& j) {
  if (j.is_null()) return {};
  if (!j.is_object()) throw SpecError("evidence: expected an object of node: state");
  bbn::Evidence ev;
  for (const auto& [node, state] : j.items()) {
    if (!state.is_string()) throw SpecError("evidence: state for '" + node + "' must be a string");
    ev.set(node, state.get<std::string>());
  }
  return ev;
}

SweepRequest sweep_request_from_json(const json& j) {
  if (!j.is_object()) throw SpecError("sweep request must be a JSON object");
  for (const auto& [key, _] : j.items()) {
    if (key != "target" && key != "axes" && key != "fixed") {
      throw SpecError("unknown sweep request field '" + key + "'");
    }
  }
  if (!j.contains("target")) throw SpecError("sweep request needs a target");
  if (!j.contains("axes") || !j.at("axes").is_array() || j.at("axes").empty()) {
    throw SpecError("sweep request needs a non-empty axes array");
  }
  SweepRequest req;
  req.target = target_from_json(j.at("target"));
  for (const auto& a : j.at("axes")) {
    if (a.is_string()) {
      req.axes.push_back({a.get<std::string>(), {}});
      continue;
    }
    if (!a.is_object()) throw SpecError("axes: expected node ids or {node, states} objects");
    Axis axis{string_field(a, "node", "axes"), {}};
    if (a.contains("states")) {
      if (!a.at("states").is_array()) throw SpecError("axes: states must be an array");
      for (const auto& s : a.at("states")) {
        if (!s.is_string()) throw SpecError("axes: states must be strings");
        axis.states.push_back(s.get<std::string>());
      }
      if (axis.states.empty()) throw SpecError("axes: states must not be empty");
    }
    req.axes.push_back(std::move(axis));
  }
  if (j.contains("fixed")) req.fixed = evidence_from_json(j.at("fixed"));
  return req;
}

}  // namespace roadrisk
