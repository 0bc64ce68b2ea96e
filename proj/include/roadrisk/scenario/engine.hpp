#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "roadrisk/bbn/inference.hpp"
#include "roadrisk/bbn/network.hpp"
#include "roadrisk/scenario/scenario.hpp"

namespace roadrisk {

enum class Engine { elimination, enumeration };

std::string_view to_string(Engine e);
std::optional<Engine> parse_engine(std::string_view text);  // "elim"/"enum" or full names

struct RunOptions {
  Engine engine = Engine::elimination;
  std::uint64_t enumeration_cap = bbn::kDefaultEnumerationCap;
  // Worker threads for sweeps; 0 picks the hardware concurrency.
  unsigned threads = 0;
};

// A malformed sweep or gap request (overlapping axes, empty state lists...).
class SpecError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct PosteriorReport {
  std::string scenario_id;
  bbn::Evidence evidence;
  std::vector<bbn::Distribution> distributions;
  std::string model_name;
  std::string model_hash;
  Engine engine = Engine::elimination;
};

// Posteriors for the scenario targets (every node when empty). Evidence
// nodes come back as point masses.
PosteriorReport run_scenario(const bbn::Network& net, const Scenario& scenario,
                             const RunOptions& options = {});

struct TargetState {
  std::string node;
  std::string state;
  friend bool operator==(const TargetState&, const TargetState&) = default;
};

struct Axis {
  std::string node;
  std::vector<std::string> states;  // empty in a request means all states
  friend bool operator==(const Axis&, const Axis&) = default;
};

struct SweepCell {
  std::vector<std::string> assignment;  // one state per axis
  std::optional<double> probability;    // empty when the cell failed
  std::string error;
};

struct SweepTable {
  TargetState target;
  std::vector<Axis> axes;  // states always filled in
  bbn::Evidence fixed;
  std::vector<SweepCell> cells;  // row-major over axes, last axis fastest
  std::string model_name;
  std::string model_hash;

  std::size_t cell_index(const std::vector<std::size_t>& state_indices) const;
};

// Product of axis cardinalities after filling in empty state lists.
std::uint64_t sweep_cell_count(const bbn::Network& net, const std::vector<Axis>& axes);

// One posterior query per axis combination, evidence = fixed ∪ combination.
// Cells are independent and evaluated in parallel; impossible combinations
// are reported per cell. An axis on the target node itself is allowed and
// yields point-mass cells.
SweepTable sweep(const bbn::Network& net, const TargetState& target, std::vector<Axis> axes,
                 const bbn::Evidence& fixed, const RunOptions& options = {});

struct Contrast {
  std::string node;
  std::string worse;
  std::string better;
};

struct GapRow {
  std::string condition;  // state of the conditioning node
  std::optional<double> worse;
  std::optional<double> better;
  std::optional<double> gap;  // worse - better
  std::string error;
};

struct GapSummary {
  TargetState target;
  Contrast contrast;
  Axis conditioning;
  bbn::Evidence fixed;
  std::vector<GapRow> rows;
  std::optional<double> mean_gap;  // empty if any row failed
  std::string model_name;
  std::string model_hash;
};

// Gap derived from a (conditioning × {worse, better}) sweep.
GapSummary gap_from_sweep(const SweepTable& table, const Contrast& contrast);

GapSummary condition_gap(const bbn::Network& net, const TargetState& target,
                         const Contrast& contrast, Axis conditioning, const bbn::Evidence& fixed,
                         const RunOptions& options = {});

}  // namespace roadrisk
