#pragma once

#include <string>
#include <vector>

#include "roadrisk/bbn/network.hpp"

namespace roadrisk {

// Named evidence set plus the nodes whose posteriors it asks for. Empty
// targets mean "every node".
struct Scenario {
  std::string id;
  std::string label;
  bbn::Evidence evidence;
  std::vector<std::string> targets;

  friend bool operator==(const Scenario&, const Scenario&) = default;
};

}  // namespace roadrisk
