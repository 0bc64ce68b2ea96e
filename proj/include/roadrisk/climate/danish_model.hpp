#pragma once

#include <vector>

#include "roadrisk/bbn/network.hpp"
#include "roadrisk/io/model_io.hpp"
#include "roadrisk/scenario/scenario.hpp"

namespace roadrisk::climate {

// 28-node climate risk network for the Danish road and bridge assets.
// Printed priors that do not sum to one are rescaled by normalize_network.
bbn::Network build_danish_road_network();

// baseline, worst_case_roots and worst_case_full, each targeting both
// outcome nodes.
std::vector<Scenario> preset_scenarios();

// Network, presets and per-node provenance notes, as shipped in
// danish_road_climate.model.
io::ModelDocument danish_model_document();

}  // namespace roadrisk::climate
