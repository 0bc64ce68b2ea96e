#include "roadrisk/bbn/validation.hpp"

#include <charconv>
#include <cmath>
#include <set>

#include "roadrisk/bbn/errors.hpp"

namespace roadrisk::bbn {
namespace {

std::string shortest(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

bool is_snake_case(const std::string& id) {
  if (id.empty() || !(id[0] >= 'a' && id[0] <= 'z')) return false;
  for (char c : id) {
    if (!((c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') || c == '_')) return false;
  }
  return true;
}

enum class ColumnStatus { ok, repairable, fatal };

ColumnStatus classify_column(const Eigen::MatrixXd& table, Eigen::Index j, double& sum) {
  sum = table.col(j).sum();
  const bool entries_ok = (table.col(j).array() >= 0.0).all() &&
                          (table.col(j).array() <= 1.0).all() && std::isfinite(sum);
  if (!entries_ok) return ColumnStatus::fatal;
  const double dev = std::abs(sum - 1.0);
  if (dev <= kSumTolerance) return ColumnStatus::ok;
  if (sum > 0.0 && dev <= kMaxRepairableDeviation) return ColumnStatus::repairable;
  return ColumnStatus::fatal;
}

// Walks parent links inside the unreleased set until a node repeats.
std::size_t cycle_member(const Network& net, const std::vector<bool>& released) {
  std::size_t cur = 0;
  while (released[cur]) ++cur;
  std::vector<bool> seen(net.size(), false);
  while (!seen[cur]) {
    seen[cur] = true;
    for (auto p : net.parent_indices(cur)) {
      if (p != npos && !released[p]) {
        cur = p;
        break;
      }
    }
  }
  return cur;
}

// Kahn's algorithm releasing the earliest-declared ready node. Dangling
// parents are ignored here; `released` reports which nodes made it out.
std::vector<std::size_t> kahn(const Network& net, std::vector<bool>& released) {
  const std::size_t n = net.size();
  std::vector<std::size_t> pending(n, 0);
  std::vector<std::vector<std::size_t>> children(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (auto p : net.parent_indices(i)) {
      if (p == npos) continue;
      ++pending[i];
      children[p].push_back(i);
    }
  }
  std::set<std::size_t> ready;
  for (std::size_t i = 0; i < n; ++i) {
    if (pending[i] == 0) ready.insert(i);
  }
  released.assign(n, false);
  std::vector<std::size_t> order;
  order.reserve(n);
  while (!ready.empty()) {
    const std::size_t i = *ready.begin();
    ready.erase(ready.begin());
    released[i] = true;
    order.push_back(i);
    for (auto c : children[i]) {
      if (--pending[c] == 0) ready.insert(c);
    }
  }
  return order;
}

}  // namespace

bool ValidationReport::usable() const { return fatal_count() == 0; }

std::size_t ValidationReport::fatal_count() const {
  std::size_t n = 0;
  for (const auto& f : errors) n += f.severity == Severity::fatal;
  return n;
}

ValidationReport validate_network(const Network& net, bool normalize) {
  ValidationReport report;
  auto fatal = [&](const std::string& node, std::string msg) {
    report.errors.push_back({Severity::fatal, node, std::move(msg)});
  };
  auto warn = [&](const std::string& node, std::string msg) {
    report.errors.push_back({Severity::warning, node, std::move(msg)});
  };

  std::set<std::string> ids;
  for (const auto& node : net.nodes()) {
    if (!ids.insert(node.id).second) fatal(node.id, "duplicate node id '" + node.id + "'");
    if (!is_snake_case(node.id)) warn(node.id, "node id is not lower_snake_case");
  }

  bool structure_ok = true;
  for (std::size_t i = 0; i < net.size(); ++i) {
    const Node& node = net[i];
    const auto& pidx = net.parent_indices(i);

    std::set<std::string> states;
    for (const auto& s : node.states) {
      if (s.empty()) fatal(node.id, "empty state name");
      if (!states.insert(s).second) fatal(node.id, "duplicate state '" + s + "'");
    }
    if (node.states.size() < 2) fatal(node.id, "node needs at least 2 states");

    std::set<std::string> parents;
    bool parents_resolve = true;
    for (std::size_t k = 0; k < node.parents.size(); ++k) {
      if (!parents.insert(node.parents[k]).second) {
        fatal(node.id, "parent '" + node.parents[k] + "' listed twice");
      }
      if (pidx[k] == npos) {
        fatal(node.id, "parent '" + node.parents[k] + "' is not declared in the network");
        parents_resolve = false;
        structure_ok = false;
      }
    }

    const Cpt& cpt = node.cpt;
    if (static_cast<std::size_t>(cpt.num_states()) != node.states.size()) {
      fatal(node.id, "CPT has " + std::to_string(cpt.num_states()) + " rows but node has " +
                         std::to_string(node.states.size()) + " states");
      continue;
    }
    if (parents_resolve) {
      std::size_t expected = 1;
      for (auto p : pidx) expected *= net.cardinality(p);
      if (static_cast<std::size_t>(cpt.num_columns()) != expected) {
        fatal(node.id, "CPT has " + std::to_string(cpt.num_columns()) +
                           " columns, expected " + std::to_string(expected) +
                           " (product of parent cardinalities)");
      }
    }
    if (cpt.provenance.size() != static_cast<std::size_t>(cpt.num_columns())) {
      fatal(node.id, "CPT provenance list has " + std::to_string(cpt.provenance.size()) +
                         " tags for " + std::to_string(cpt.num_columns()) + " columns");
    }

    for (Eigen::Index j = 0; j < cpt.num_columns(); ++j) {
      double sum = 0;
      const auto status = classify_column(cpt.table, j, sum);
      const std::string where = "column " + std::to_string(j);
      if (status == ColumnStatus::ok) continue;
      if (!((cpt.table.col(j).array() >= 0.0).all() && (cpt.table.col(j).array() <= 1.0).all())) {
        fatal(node.id, where + " has an entry outside [0, 1]");
      } else if (sum == 0.0) {
        fatal(node.id, where + " sums to 0");
      } else if (status == ColumnStatus::repairable && normalize) {
        report.normalized_columns.push_back({node.id, static_cast<std::size_t>(j), sum});
        warn(node.id, where + " rescaled from sum " + shortest(sum));
      } else {
        fatal(node.id, where + " sum " + shortest(sum) + " outside [1-1e-9, 1+1e-9]");
      }
    }
  }

  if (structure_ok) {
    std::vector<bool> released;
    const auto order = kahn(net, released);
    if (order.size() != net.size()) {
      const auto m = cycle_member(net, released);
      fatal(net[m].id, "cycle detected involving node '" + net[m].id + "'");
    }
  }
  return report;
}

Network normalize_network(const Network& net, ValidationReport* report) {
  std::vector<Node> nodes = net.nodes();
  const ValidationReport r = validate_network(net, true);
  for (const auto& nc : r.normalized_columns) {
    for (auto& node : nodes) {
      if (node.id != nc.node) continue;
      auto col = node.cpt.table.col(static_cast<Eigen::Index>(nc.column));
      col /= nc.original_sum;
      break;
    }
  }
  if (report) *report = r;
  return Network(net.name(), std::move(nodes), net.metadata());
}

void require_valid(const Network& net) {
  const ValidationReport r = validate_network(net, false);
  for (const auto& f : r.errors) {
    if (f.severity != Severity::fatal) continue;
    if (f.message.rfind("cycle detected", 0) == 0) throw CycleError(f.node);
    throw InvalidNetwork("invalid network: node '" + f.node + "': " + f.message);
  }
}

std::vector<std::size_t> topological_indices(const Network& net) {
  for (std::size_t i = 0; i < net.size(); ++i) {
    for (std::size_t k = 0; k < net[i].parents.size(); ++k) {
      if (net.parent_indices(i)[k] == npos) {
        throw InvalidReference("unknown parent '" + net[i].parents[k] + "' of node '" +
                               net[i].id + "'");
      }
    }
  }
  std::vector<bool> released;
  auto order = kahn(net, released);
  if (order.size() != net.size()) throw CycleError(net[cycle_member(net, released)].id);
  return order;
}

std::vector<std::string> topological_order(const Network& net) {
  std::vector<std::string> ids;
  for (auto i : topological_indices(net)) ids.push_back(net[i].id);
  return ids;
}

}  // namespace roadrisk::bbn
