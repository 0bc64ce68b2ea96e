#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "roadrisk/bbn/network.hpp"

namespace roadrisk::bbn {

inline constexpr double kSumTolerance = 1e-9;
// Largest |sum - 1| a column may show and still be rescaled on request.
inline constexpr double kMaxRepairableDeviation = 0.6;

enum class Severity { warning, fatal };

struct Finding {
  Severity severity;
  std::string node;  // empty for network-level findings
  std::string message;
};

struct NormalizedColumn {
  std::string node;
  std::size_t column;
  double original_sum;
};

struct ValidationReport {
  std::vector<Finding> errors;
  std::vector<NormalizedColumn> normalized_columns;

  bool usable() const;
  std::size_t fatal_count() const;
};

// Checks ids, parent references, acyclicity, state lists, CPT shapes,
// entry ranges and column sums. With `normalize`, columns whose sum lies in
// (0, inf) within kMaxRepairableDeviation of 1 are reported as rescaled
// (warning) instead of fatal; use normalize_network to obtain the repaired
// values. A zero-sum column is always fatal.
ValidationReport validate_network(const Network& net, bool normalize = false);

// Copy of `net` with every repairable column rescaled to sum 1. Columns that
// already sum to 1 within tolerance are left bit-identical.
Network normalize_network(const Network& net, ValidationReport* report = nullptr);

// Throws InvalidNetwork (or CycleError) on the first fatal finding.
void require_valid(const Network& net);

// Deterministic topological order: Kahn's algorithm, always releasing the
// earliest-declared ready node. Throws CycleError naming one cycle member and
// InvalidReference on a dangling parent.
std::vector<std::string> topological_order(const Network& net);
std::vector<std::size_t> topological_indices(const Network& net);

}  // namespace roadrisk::bbn
