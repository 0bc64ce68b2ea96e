#include "roadrisk/service/api.hpp"

#include <set>

#include "roadrisk/bbn/errors.hpp"
#include "roadrisk/climate/danish_model.hpp"
#include "roadrisk/scenario/json.hpp"

namespace roadrisk::service {
namespace {

using nlohmann::json;

json parse_body(std::string_view body) {
  if (body.find_first_not_of(" \t\r\n") == std::string_view::npos) return json::object();
  return json::parse(body.begin(), body.end());
}

Response ok(const json& j) { return Response{200, render_json(j), "application/json"}; }

}  // namespace

std::vector<Scenario> scenario_catalog(const std::vector<Scenario>& from_model) {
  std::vector<Scenario> out = from_model;
  std::set<std::string> ids;
  for (const auto& s : out) ids.insert(s.id);
  for (auto& s : climate::preset_scenarios()) {
    if (!ids.count(s.id)) out.push_back(std::move(s));
  }
  return out;
}

Response error_response(int status, std::string error, std::string detail) {
  return Response{status, render_json(json{{"error", std::move(error)}, {"detail", std::move(detail)}}),
                  "application/json"};
}

Api::Api(io::ModelDocument doc, RunOptions options, std::size_t max_body)
    : doc_(std::move(doc)),
      options_(options),
      max_body_(max_body),
      hash_(io::network_hash(doc_.network)),
      scenarios_(scenario_catalog(doc_.scenarios)) {}

template <typename Fn>
Response Api::guarded(std::string_view body, Fn&& fn) const {
  if (body.size() > max_body_) {
    return error_response(413, "payload_too_large",
                          "request body exceeds " + std::to_string(max_body_) + " bytes");
  }
  try {
    return fn();
  } catch (const json::parse_error& e) {
    return error_response(400, "malformed_json", e.what());
  } catch (const json::exception& e) {
    return error_response(400, "bad_request", e.what());
  } catch (const SpecError& e) {
    return error_response(400, "bad_request", e.what());
  } catch (const bbn::InvalidReference& e) {
    return error_response(400, "unknown_reference", e.what());
  } catch (const bbn::ImpossibleEvidence& e) {
    return error_response(422, "impossible_evidence", e.what());
  } catch (const bbn::StateSpaceTooLarge& e) {
    return error_response(422, "state_space_too_large", e.what());
  } catch (const std::exception& e) {
    return error_response(500, "internal_error", e.what());
  }
}

Response Api::get_model(bool include_cpts) const {
  const auto& net = doc_.network;
  std::vector<std::vector<std::string>> children(net.size());
  for (std::size_t i = 0; i < net.size(); ++i) {
    for (auto p : net.parent_indices(i)) children[p].push_back(net[i].id);
  }
  json nodes = json::array();
  std::size_t paper = 0, reconstructed = 0;
  json flagged = json::array();
  for (std::size_t i = 0; i < net.size(); ++i) {
    const auto& n = net[i];
    std::size_t r = 0;
    for (auto tag : n.cpt.provenance) r += tag == bbn::Provenance::reconstructed;
    const std::size_t p = n.cpt.provenance.size() - r;
    paper += p;
    reconstructed += r;
    if (r) flagged.push_back(n.id);
    json entry{{"id", n.id},
               {"label", n.label},
               {"states", n.states},
               {"parents", n.parents},
               {"children", children[i]},
               {"kind", n.parents.empty() ? "root" : children[i].empty() ? "outcome" : "intermediate"},
               {"provenance", {{"paper", p}, {"reconstructed", r}}}};
    if (include_cpts) entry["cpt"] = io::node_to_json(n)["cpt"];
    nodes.push_back(std::move(entry));
  }
  return ok(json{{"name", net.name()},
                 {"hash", hash_},
                 {"format_version", doc_.format_version},
                 {"nodes", std::move(nodes)},
                 {"provenance",
                  {{"paper", paper}, {"reconstructed", reconstructed}, {"nodes_with_reconstructed", flagged}}},
                 {"notes", doc_.notes}});
}

Response Api::infer(std::string_view body) const {
  return guarded(body, [&] {
    const json req = parse_body(body);
    if (!req.is_object()) throw SpecError("request body must be a JSON object");
    Scenario s;
    RunOptions opt = options_;
    for (const auto& [key, value] : req.items()) {
      if (key == "evidence") {
        s.evidence = evidence_from_json(value);
      } else if (key == "targets") {
        if (!value.is_array()) throw SpecError("targets must be an array of node ids");
        for (const auto& t : value) {
          if (!t.is_string()) throw SpecError("targets must be an array of node ids");
          s.targets.push_back(t.get<std::string>());
        }
      } else if (key == "engine") {
        const auto e = value.is_string() ? parse_engine(value.get<std::string>()) : std::nullopt;
        if (!e) throw SpecError("engine must be \"elim\" or \"enum\"");
        opt.engine = *e;
      } else {
        throw SpecError("unknown request field '" + key + "'");
      }
    }
    return ok(to_json(roadrisk::run_scenario(doc_.network, s, opt)));
  });
}

Response Api::scenarios() const {
  std::set<std::string> from_model;
  for (const auto& s : doc_.scenarios) from_model.insert(s.id);
  json list = json::array();
  for (const auto& s : scenarios_) {
    json j = io::scenario_to_json(s);
    j["source"] = from_model.count(s.id) ? "model" : "builtin";
    list.push_back(std::move(j));
  }
  return ok(json{{"scenarios", std::move(list)}});
}

Response Api::run_scenario(std::string_view id) const {
  for (const auto& s : scenarios_) {
    if (s.id == id) {
      return guarded({}, [&] { return ok(to_json(roadrisk::run_scenario(doc_.network, s, options_))); });
    }
  }
  return error_response(404, "unknown_scenario", "no scenario with id '" + std::string(id) + "'");
}

Response Api::sweep(std::string_view body) const {
  return guarded(body, [&] {
    const auto req = sweep_request_from_json(parse_body(body));
    const auto cells = sweep_cell_count(doc_.network, req.axes);
    if (cells > kMaxSweepCells) {
      return error_response(422, "sweep_too_large",
                            "sweep has " + std::to_string(cells) + " cells; the limit is " +
                                std::to_string(kMaxSweepCells));
    }
    return ok(to_json(roadrisk::sweep(doc_.network, req.target, req.axes, req.fixed, options_)));
  });
}

Response Api::healthz() const {
  return ok(json{{"status", "ok"}, {"model", {{"name", doc_.network.name()}, {"hash", hash_}}}});
}

}  // namespace roadrisk::service
