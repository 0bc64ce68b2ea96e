#include "roadrisk/scenario/engine.hpp"

#include <algorithm>
#include <atomic>
#include <set>
#include <thread>

#include "roadrisk/bbn/errors.hpp"
#include "roadrisk/bbn/validation.hpp"
#include "roadrisk/io/model_io.hpp"

namespace roadrisk {
namespace {

std::vector<bbn::Distribution> posteriors(const bbn::Network& net, const bbn::Evidence& ev,
                                          const std::vector<std::string>& targets,
                                          const RunOptions& opt) {
  if (opt.engine == Engine::enumeration) {
    return bbn::enumerate_posteriors(net, ev, targets, opt.enumeration_cap);
  }
  return bbn::eliminate_posterior(net, ev, targets);
}

std::size_t state_of(const bbn::Network& net, const std::string& node, const std::string& state) {
  const auto s = net.node(node).state_index(state);
  if (!s) throw bbn::InvalidReference("unknown state '" + state + "' for node '" + node + "'");
  return *s;
}

void fill_axes(const bbn::Network& net, const TargetState& target, std::vector<Axis>& axes,
               const bbn::Evidence& fixed) {
  state_of(net, target.node, target.state);
  std::set<std::string> seen;
  for (auto& axis : axes) {
    const auto& node = net.node(axis.node);
    if (fixed.contains(axis.node)) {
      throw SpecError("axis '" + axis.node + "' is also fixed evidence");
    }
    if (!seen.insert(axis.node).second) throw SpecError("axis '" + axis.node + "' listed twice");
    if (axis.states.empty()) axis.states = node.states;
    std::set<std::string> states;
    for (const auto& s : axis.states) {
      state_of(net, axis.node, s);
      if (!states.insert(s).second) {
        throw SpecError("state '" + s + "' listed twice on axis '" + axis.node + "'");
      }
    }
  }
  fixed.resolve(net);
}

}  // namespace

std::string_view to_string(Engine e) {
  return e == Engine::enumeration ? "enumeration" : "elimination";
}

std::optional<Engine> parse_engine(std::string_view text) {
  if (text == "elim" || text == "elimination") return Engine::elimination;
  if (text == "enum" || text == "enumeration") return Engine::enumeration;
  return std::nullopt;
}

PosteriorReport run_scenario(const bbn::Network& net, const Scenario& scenario,
                             const RunOptions& options) {
  std::vector<std::string> targets = scenario.targets;
  if (targets.empty()) {
    for (const auto& n : net.nodes()) targets.push_back(n.id);
  }
  PosteriorReport report;
  report.scenario_id = scenario.id;
  report.evidence = scenario.evidence;
  report.distributions = posteriors(net, scenario.evidence, targets, options);
  report.model_name = net.name();
  report.model_hash = io::network_hash(net);
  report.engine = options.engine;
  return report;
}

std::size_t SweepTable::cell_index(const std::vector<std::size_t>& state_indices) const {
  std::size_t idx = 0;
  for (std::size_t k = 0; k < axes.size(); ++k) idx = idx * axes[k].states.size() + state_indices[k];
  return idx;
}

std::uint64_t sweep_cell_count(const bbn::Network& net, const std::vector<Axis>& axes) {
  std::uint64_t n = 1;
  for (const auto& a : axes) {
    const std::uint64_t c = a.states.empty() ? net.node(a.node).states.size() : a.states.size();
    if (c != 0 && n > UINT64_MAX / c) return UINT64_MAX;
    n *= c;
  }
  return n;
}

SweepTable sweep(const bbn::Network& net, const TargetState& target, std::vector<Axis> axes,
                 const bbn::Evidence& fixed, const RunOptions& options) {
  bbn::require_valid(net);
  fill_axes(net, target, axes, fixed);

  SweepTable table;
  table.target = target;
  table.axes = std::move(axes);
  table.fixed = fixed;
  table.model_name = net.name();
  table.model_hash = io::network_hash(net);

  const std::size_t count = sweep_cell_count(net, table.axes);
  table.cells.resize(count);
  for (std::size_t c = 0; c < count; ++c) {
    auto& cell = table.cells[c];
    cell.assignment.resize(table.axes.size());
    std::size_t rest = c;
    for (std::size_t k = table.axes.size(); k-- > 0;) {
      const auto& states = table.axes[k].states;
      cell.assignment[k] = states[rest % states.size()];
      rest /= states.size();
    }
  }

  auto evaluate = [&](SweepCell& cell) {
    bbn::Evidence ev = fixed;
    for (std::size_t k = 0; k < table.axes.size(); ++k) ev.set(table.axes[k].node, cell.assignment[k]);
    try {
      cell.probability = posteriors(net, ev, {target.node}, options).front()[target.state];
    } catch (const std::exception& e) {
      cell.error = e.what();
    }
  };

  unsigned workers = options.threads ? options.threads : std::thread::hardware_concurrency();
  workers = static_cast<unsigned>(std::clamp<std::size_t>(workers, 1, std::max<std::size_t>(count, 1)));
  if (workers == 1) {
    for (auto& cell : table.cells) evaluate(cell);
    return table;
  }
  // Each worker writes only the cells it claims, so assembly order is fixed.
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t c; (c = next.fetch_add(1)) < count;) evaluate(table.cells[c]);
    });
  }
  for (auto& t : pool) t.join();
  return table;
}

GapSummary gap_from_sweep(const SweepTable& table, const Contrast& contrast) {
  if (table.axes.size() != 2 || table.axes[1].node != contrast.node ||
      table.axes[1].states != std::vector<std::string>{contrast.worse, contrast.better}) {
    throw SpecError("sweep is not shaped (conditioning, contrast worse/better)");
  }
  GapSummary g;
  g.target = table.target;
  g.contrast = contrast;
  g.conditioning = table.axes[0];
  g.fixed = table.fixed;
  g.model_name = table.model_name;
  g.model_hash = table.model_hash;

  double total = 0;
  bool complete = true;
  for (std::size_t i = 0; i < g.conditioning.states.size(); ++i) {
    const auto& worse = table.cells[table.cell_index({i, 0})];
    const auto& better = table.cells[table.cell_index({i, 1})];
    GapRow row;
    row.condition = g.conditioning.states[i];
    row.worse = worse.probability;
    row.better = better.probability;
    if (worse.probability && better.probability) {
      row.gap = *worse.probability - *better.probability;
      total += *row.gap;
    } else {
      row.error = worse.error.empty() ? better.error : worse.error;
      complete = false;
    }
    g.rows.push_back(std::move(row));
  }
  if (complete && !g.rows.empty()) g.mean_gap = total / static_cast<double>(g.rows.size());
  return g;
}

GapSummary condition_gap(const bbn::Network& net, const TargetState& target,
                         const Contrast& contrast, Axis conditioning, const bbn::Evidence& fixed,
                         const RunOptions& options) {
  if (contrast.worse == contrast.better) {
    throw SpecError("contrast states must differ");
  }
  if (conditioning.node == contrast.node) {
    throw SpecError("conditioning node must differ from the contrast node");
  }
  const auto table = sweep(net, target,
                           {std::move(conditioning), Axis{contrast.node, {contrast.worse, contrast.better}}},
                           fixed, options);
  return gap_from_sweep(table, contrast);
}

}  // namespace roadrisk
