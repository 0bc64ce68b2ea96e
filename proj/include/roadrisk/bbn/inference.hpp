#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "roadrisk/bbn/factor.hpp"
#include "roadrisk/bbn/network.hpp"

namespace roadrisk::bbn {

// Default guard for the enumeration oracle (completions enumerated).
inline constexpr std::uint64_t kDefaultEnumerationCap = std::uint64_t{1} << 24;

// Product of the per-node CPT entries selected by a full assignment.
double joint_probability(const Network& net, const Evidence& full_assignment);

// Brute-force posterior by summing the joint over every completion of the
// evidence. This is the reference oracle for eliminate_posterior.
Distribution enumerate_posterior(const Network& net, const Evidence& evidence,
                                 const std::string& target,
                                 std::uint64_t cap = kDefaultEnumerationCap);

// Same oracle for several targets in one pass.
std::vector<Distribution> enumerate_posteriors(const Network& net, const Evidence& evidence,
                                               const std::vector<std::string>& targets,
                                               std::uint64_t cap = kDefaultEnumerationCap);

// Exact posteriors by variable elimination with a min-fill ordering.
std::vector<Distribution> eliminate_posterior(const Network& net, const Evidence& evidence,
                                              const std::vector<std::string>& targets);

// Variable elimination with a caller-supplied order. Nodes in `order` that are
// observed or the target are skipped; hidden nodes missing from it are
// eliminated afterwards in declaration order.
std::vector<Distribution> eliminate_posterior_with_order(const Network& net,
                                                         const Evidence& evidence,
                                                         const std::vector<std::string>& targets,
                                                         const std::vector<std::string>& order);

// CPT of node `i` as a factor over (parents..., node), evidence-free.
Factor node_factor(const Network& net, std::size_t i);

// Greedy min-fill order over `hidden`, ties broken by smallest index.
std::vector<VarId> min_fill_order(const std::vector<Factor>& factors,
                                  const std::vector<VarId>& hidden);

}  // namespace roadrisk::bbn
