#pragma once

#include <nlohmann/json.hpp>

#include "roadrisk/scenario/engine.hpp"

namespace roadrisk {

// JSON shapes shared by the HTTP service and `--format json` on the CLI.
nlohmann::json to_json(const PosteriorReport& report);
nlohmann::json to_json(const SweepTable& table);
nlohmann::json to_json(const GapSummary& gap);

// Text form of every JSON payload: two-space indent, trailing newline. Both
// the service bodies and `--format json` on the CLI use it.
std::string render_json(const nlohmann::json& j);

struct SweepRequest {
  TargetState target;
  std::vector<Axis> axes;
  bbn::Evidence fixed;
};

// {"node": "state", ...}; throws SpecError on anything else.
bbn::Evidence evidence_from_json(const nlohmann::json& j);

// Target as {"node", "state"} or "node=state"; axes as [{"node", "states"?}]
// or bare node ids; optional "fixed" evidence object. Throws SpecError.
SweepRequest sweep_request_from_json(const nlohmann::json& j);

}  // namespace roadrisk
