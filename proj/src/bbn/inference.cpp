#include "roadrisk/bbn/inference.hpp"

#include <algorithm>
#include <optional>
#include <set>

#include "roadrisk/bbn/errors.hpp"
#include "roadrisk/bbn/validation.hpp"

namespace roadrisk::bbn {
namespace {

std::size_t column_index(const Network& net, std::size_t i, const std::vector<std::size_t>& st) {
  std::size_t col = 0;
  for (auto p : net.parent_indices(i)) col = col * net.cardinality(p) + st[p];
  return col;
}

Distribution make_distribution(const Node& node, Eigen::VectorXd probs) {
  return Distribution{node.id, node.states, std::move(probs)};
}

Distribution point_mass(const Node& node, std::size_t state) {
  Eigen::VectorXd p = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(node.states.size()));
  p(static_cast<Eigen::Index>(state)) = 1.0;
  return make_distribution(node, std::move(p));
}

std::vector<std::size_t> resolve_targets(const Network& net, const std::vector<std::string>& ids) {
  std::vector<std::size_t> out;
  out.reserve(ids.size());
  for (const auto& id : ids) out.push_back(net.index_of(id));
  return out;
}

// Evidence-reduced CPT factors for every node.
std::vector<Factor> reduced_factors(const Network& net, const std::vector<std::size_t>& observed) {
  std::vector<Factor> factors;
  factors.reserve(net.size());
  for (std::size_t i = 0; i < net.size(); ++i) {
    Factor f = node_factor(net, i);
    for (VarId v : std::vector<VarId>(f.scope())) {
      if (observed[v] != npos) f = factor_reduce(f, v, observed[v]);
    }
    factors.push_back(std::move(f));
  }
  return factors;
}

// Sums out `order` in sequence and multiplies what remains.
Factor eliminate(std::vector<Factor> factors, const std::vector<VarId>& order) {
  for (VarId var : order) {
    Factor joint;
    std::vector<Factor> rest;
    rest.reserve(factors.size());
    bool touched = false;
    for (auto& f : factors) {
      if (f.contains(var)) {
        joint = factor_product(joint, f);
        touched = true;
      } else {
        rest.push_back(std::move(f));
      }
    }
    if (touched) rest.push_back(factor_marginalize(joint, var));
    factors = std::move(rest);
  }
  Factor result;
  for (const auto& f : factors) result = factor_product(result, f);
  return result;
}

std::vector<VarId> hidden_for(const Network& net, const std::vector<std::size_t>& observed,
                              std::optional<std::size_t> keep) {
  std::vector<VarId> hidden;
  for (std::size_t i = 0; i < net.size(); ++i) {
    if (observed[i] == npos && (!keep || *keep != i)) hidden.push_back(i);
  }
  return hidden;
}

template <typename OrderFn>
std::vector<Distribution> eliminate_impl(const Network& net, const Evidence& evidence,
                                         const std::vector<std::string>& targets,
                                         OrderFn&& make_order) {
  require_valid(net);
  const auto observed = evidence.resolve(net);
  const auto target_idx = resolve_targets(net, targets);
  const auto factors = reduced_factors(net, observed);

  std::optional<double> evidence_mass;
  auto require_possible = [&] {
    if (!evidence_mass) {
      const auto hidden = hidden_for(net, observed, std::nullopt);
      evidence_mass = eliminate(factors, make_order(factors, hidden)).sum();
    }
    if (!(*evidence_mass > 0.0)) throw ImpossibleEvidence();
  };

  if (target_idx.empty()) require_possible();

  std::vector<Distribution> out;
  out.reserve(targets.size());
  for (auto t : target_idx) {
    if (observed[t] != npos) {
      require_possible();
      out.push_back(point_mass(net[t], observed[t]));
      continue;
    }
    const auto hidden = hidden_for(net, observed, t);
    const Factor f = eliminate(factors, make_order(factors, hidden));
    const double z = f.sum();
    if (!(z > 0.0)) throw ImpossibleEvidence();
    // The remaining scope is exactly {t}.
    Eigen::VectorXd probs = f.values().matrix() / z;
    out.push_back(make_distribution(net[t], std::move(probs)));
  }
  return out;
}

}  // namespace

Factor node_factor(const Network& net, std::size_t i) {
  const Node& node = net[i];
  std::vector<VarId> scope(net.parent_indices(i).begin(), net.parent_indices(i).end());
  std::vector<std::size_t> cards;
  for (auto p : scope) cards.push_back(net.cardinality(p));
  scope.push_back(i);
  cards.push_back(node.states.size());

  const auto rows = node.cpt.table.rows();
  const auto cols = node.cpt.table.cols();
  Factor::Values values(rows * cols);
  // Child is the fastest-varying variable: cell = column * |states| + state.
  for (Eigen::Index c = 0; c < cols; ++c) values.segment(c * rows, rows) = node.cpt.table.col(c);
  return Factor(std::move(scope), std::move(cards), std::move(values));
}

std::vector<VarId> min_fill_order(const std::vector<Factor>& factors,
                                  const std::vector<VarId>& hidden) {
  std::set<VarId> vars;
  for (const auto& f : factors) vars.insert(f.scope().begin(), f.scope().end());
  vars.insert(hidden.begin(), hidden.end());
  if (vars.empty()) return {};
  const VarId max_var = *vars.rbegin();

  std::vector<std::set<VarId>> adj(max_var + 1);
  for (const auto& f : factors) {
    for (auto a : f.scope()) {
      for (auto b : f.scope()) {
        if (a != b) adj[a].insert(b);
      }
    }
  }

  std::set<VarId> remaining(hidden.begin(), hidden.end());
  std::vector<VarId> order;
  order.reserve(remaining.size());
  while (!remaining.empty()) {
    VarId best = *remaining.begin();
    std::size_t best_fill = static_cast<std::size_t>(-1);
    for (VarId v : remaining) {  // ascending, so the first minimum wins ties
      std::size_t fill = 0;
      for (auto a = adj[v].begin(); a != adj[v].end(); ++a) {
        for (auto b = std::next(a); b != adj[v].end(); ++b) {
          if (!adj[*a].count(*b)) ++fill;
        }
      }
      if (fill < best_fill) {
        best_fill = fill;
        best = v;
      }
    }
    for (auto a : adj[best]) {
      for (auto b : adj[best]) {
        if (a != b) adj[a].insert(b);
      }
      adj[a].erase(best);
    }
    adj[best].clear();
    remaining.erase(best);
    order.push_back(best);
  }
  return order;
}

double joint_probability(const Network& net, const Evidence& full_assignment) {
  require_valid(net);
  const auto st = full_assignment.resolve(net);
  for (std::size_t i = 0; i < net.size(); ++i) {
    if (st[i] == npos) {
      throw IncompleteAssignment("assignment does not cover node '" + net[i].id + "'");
    }
  }
  double p = 1.0;
  for (std::size_t i = 0; i < net.size(); ++i) {
    p *= net[i].cpt.table(static_cast<Eigen::Index>(st[i]),
                          static_cast<Eigen::Index>(column_index(net, i, st)));
  }
  return p;
}

std::vector<Distribution> enumerate_posteriors(const Network& net, const Evidence& evidence,
                                               const std::vector<std::string>& targets,
                                               std::uint64_t cap) {
  require_valid(net);
  const auto observed = evidence.resolve(net);
  const auto target_idx = resolve_targets(net, targets);
  const auto order = topological_indices(net);

  std::uint64_t completions = 1;
  for (std::size_t i = 0; i < net.size(); ++i) {
    if (observed[i] != npos) continue;
    const auto c = net.cardinality(i);
    if (completions > cap / c) {
      throw StateSpaceTooLarge("enumeration would visit more than " + std::to_string(cap) +
                               " completions; raise the cap explicitly");
    }
    completions *= c;
  }

  std::vector<Eigen::VectorXd> acc;
  for (auto t : target_idx) {
    acc.push_back(Eigen::VectorXd::Zero(static_cast<Eigen::Index>(net.cardinality(t))));
  }
  double total = 0.0;
  std::vector<std::size_t> st(net.size(), 0);

  // Depth-first over the topological order; parents are always assigned
  // before their children, so each CPT lookup is available incrementally.
  auto visit = [&](auto&& self, std::size_t depth, double weight) -> void {
    if (depth == order.size()) {
      total += weight;
      for (std::size_t k = 0; k < target_idx.size(); ++k) {
        acc[k](static_cast<Eigen::Index>(st[target_idx[k]])) += weight;
      }
      return;
    }
    const std::size_t i = order[depth];
    const auto col = static_cast<Eigen::Index>(column_index(net, i, st));
    const std::size_t lo = observed[i] == npos ? 0 : observed[i];
    const std::size_t hi = observed[i] == npos ? net.cardinality(i) : observed[i] + 1;
    for (std::size_t s = lo; s < hi; ++s) {
      const double p = net[i].cpt.table(static_cast<Eigen::Index>(s), col);
      if (p == 0.0) continue;
      st[i] = s;
      self(self, depth + 1, weight * p);
    }
  };
  visit(visit, 0, 1.0);

  if (!(total > 0.0)) throw ImpossibleEvidence();
  std::vector<Distribution> out;
  for (std::size_t k = 0; k < target_idx.size(); ++k) {
    out.push_back(make_distribution(net[target_idx[k]], acc[k] / total));
  }
  return out;
}

Distribution enumerate_posterior(const Network& net, const Evidence& evidence,
                                 const std::string& target, std::uint64_t cap) {
  return enumerate_posteriors(net, evidence, {target}, cap).front();
}

std::vector<Distribution> eliminate_posterior(const Network& net, const Evidence& evidence,
                                              const std::vector<std::string>& targets) {
  return eliminate_impl(net, evidence, targets, [](const auto& factors, const auto& hidden) {
    return min_fill_order(factors, hidden);
  });
}

std::vector<Distribution> eliminate_posterior_with_order(const Network& net,
                                                         const Evidence& evidence,
                                                         const std::vector<std::string>& targets,
                                                         const std::vector<std::string>& order) {
  std::vector<VarId> preferred;
  for (const auto& id : order) preferred.push_back(net.index_of(id));
  return eliminate_impl(net, evidence, targets,
                        [&preferred](const auto&, const std::vector<VarId>& hidden) {
                          std::vector<VarId> out;
                          std::set<VarId> want(hidden.begin(), hidden.end());
                          for (auto v : preferred) {
                            if (want.erase(v)) out.push_back(v);
                          }
                          out.insert(out.end(), want.begin(), want.end());
                          return out;
                        });
}

}  // namespace roadrisk::bbn
