#include "roadrisk/cli/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <iomanip>
#include <ostream>
#include <sstream>

#include "roadrisk/bbn/errors.hpp"
#include "roadrisk/bbn/validation.hpp"
#include "roadrisk/climate/return_period.hpp"
#include "roadrisk/io/model_io.hpp"
#include "roadrisk/scenario/engine.hpp"
#include "roadrisk/scenario/export.hpp"
#include "roadrisk/scenario/json.hpp"
#include "roadrisk/service/api.hpp"
#include "roadrisk/service/server.hpp"

namespace roadrisk::cli {
namespace {

constexpr int kOk = 0;
constexpr int kFailed = 1;
constexpr int kUsage = 2;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Options {
  std::string model = "danish_road_climate.model";
  std::string format = "text";
  std::string engine = "elim";
  std::uint64_t enum_cap = bbn::kDefaultEnumerationCap;
  bool normalize = false;
  std::vector<std::string> evidence, targets, axes, fixed;
  std::string scenario, target, contrast, by;
  double T = 0;
  int r = 0;
  std::string host = "127.0.0.1";
  int port = 8080;
  std::string static_dir;
};

std::pair<std::string, std::string> split_pair(const std::string& text, const char* what) {
  const auto eq = text.find('=');
  if (eq == std::string::npos || eq == 0 || eq + 1 == text.size()) {
    throw UsageError(std::string(what) + " '" + text + "' is not of the form node=state");
  }
  return {text.substr(0, eq), text.substr(eq + 1)};
}

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  for (std::string item; std::getline(ss, item, ',');) {
    if (item.empty()) throw UsageError("empty state in list '" + text + "'");
    out.push_back(item);
  }
  return out;
}

// "node" or "node=s1,s2,..."
Axis parse_axis(const std::string& text) {
  const auto eq = text.find('=');
  if (eq == std::string::npos) return {text, {}};
  if (eq == 0 || eq + 1 == text.size()) throw UsageError("bad axis '" + text + "'");
  return {text.substr(0, eq), split_list(text.substr(eq + 1))};
}

RunOptions run_options(const Options& o) {
  RunOptions r;
  const auto e = parse_engine(o.engine);
  if (!e) throw UsageError("unknown engine '" + o.engine + "'");
  r.engine = *e;
  r.enumeration_cap = o.enum_cap;
  return r;
}

bbn::Evidence parse_evidence(const std::vector<std::string>& items) {
  bbn::Evidence ev;
  for (const auto& item : items) {
    auto [node, state] = split_pair(item, "evidence");
    ev.set(std::move(node), std::move(state));
  }
  return ev;
}

// Each --fixed item is a scenario id or node=state; later items win.
bbn::Evidence parse_fixed(const std::vector<std::string>& items,
                          const std::vector<Scenario>& catalog) {
  bbn::Evidence ev;
  for (const auto& item : items) {
    if (item.find('=') != std::string::npos) {
      ev = ev.merged(parse_evidence({item}));
      continue;
    }
    const auto it = std::find_if(catalog.begin(), catalog.end(),
                                 [&](const Scenario& s) { return s.id == item; });
    if (it == catalog.end()) throw UsageError("unknown scenario '" + item + "'");
    ev = ev.merged(it->evidence);
  }
  return ev;
}

std::string join_evidence(const bbn::Evidence& ev) {
  if (ev.empty()) return "(none)";
  std::string out;
  for (const auto& [node, state] : ev.assignments()) {
    if (!out.empty()) out += ", ";
    out += node + "=" + state;
  }
  return out;
}

std::size_t column_width(const std::vector<std::string>& items, std::size_t floor) {
  std::size_t w = floor;
  for (const auto& s : items) w = std::max(w, s.size());
  return w + 2;
}

void print_text(std::ostream& out, const PosteriorReport& r) {
  if (!r.scenario_id.empty()) out << "scenario: " << r.scenario_id << "\n";
  out << "model:    " << r.model_name << " " << r.model_hash << "\n"
      << "engine:   " << to_string(r.engine) << "\n"
      << "evidence: " << join_evidence(r.evidence) << "\n\n";
  std::vector<std::string> nodes, states;
  for (const auto& d : r.distributions) {
    nodes.push_back(d.node);
    states.insert(states.end(), d.states.begin(), d.states.end());
  }
  const auto wn = column_width(nodes, 4);
  const auto ws = column_width(states, 5);
  out << std::left << std::setw(static_cast<int>(wn)) << "node" << std::setw(static_cast<int>(ws))
      << "state" << "probability\n";
  for (const auto& d : r.distributions) {
    for (std::size_t s = 0; s < d.states.size(); ++s) {
      out << std::setw(static_cast<int>(wn)) << (s == 0 ? d.node : "")
          << std::setw(static_cast<int>(ws)) << d.states[s]
          << format_probability(d.probabilities(static_cast<Eigen::Index>(s)));
      if (s == 0 && r.evidence.contains(d.node)) out << "  (observed)";
      out << "\n";
    }
  }
}

void print_text(std::ostream& out, const SweepTable& t) {
  out << "target: " << t.target.node << "=" << t.target.state << "\n"
      << "fixed:  " << join_evidence(t.fixed) << "\n"
      << "model:  " << t.model_name << " " << t.model_hash << "\n\n";
  std::vector<int> widths;
  for (std::size_t k = 0; k < t.axes.size(); ++k) {
    widths.push_back(static_cast<int>(column_width(t.axes[k].states, t.axes[k].node.size())));
    out << std::left << std::setw(widths.back()) << t.axes[k].node;
  }
  out << "probability\n";
  for (const auto& cell : t.cells) {
    for (std::size_t k = 0; k < t.axes.size(); ++k) out << std::setw(widths[k]) << cell.assignment[k];
    out << (cell.probability ? format_probability(*cell.probability) : "error: " + cell.error) << "\n";
  }
}

void print_text(std::ostream& out, const GapSummary& g) {
  const auto& c = g.contrast;
  out << "target:   " << g.target.node << "=" << g.target.state << "\n"
      << "contrast: " << c.node << " " << c.worse << " vs " << c.better << "\n"
      << "fixed:    " << join_evidence(g.fixed) << "\n"
      << "model:    " << g.model_name << " " << g.model_hash << "\n\n";
  const int w = static_cast<int>(column_width(g.conditioning.states, g.conditioning.node.size()));
  out << std::left << std::setw(w) << g.conditioning.node << std::setw(12) << c.worse
      << std::setw(12) << c.better << "gap\n";
  auto cell = [](const std::optional<double>& p) { return p ? format_probability(*p) : "-"; };
  for (const auto& r : g.rows) {
    out << std::setw(w) << r.condition << std::setw(12) << cell(r.worse) << std::setw(12)
        << cell(r.better) << cell(r.gap);
    if (!r.error.empty()) out << "  error: " << r.error;
    out << "\n";
  }
  out << "mean gap: " << cell(g.mean_gap) << "\n";
}

template <typename Result>
void emit(std::ostream& out, const Options& o, const Result& result) {
  if (o.format == "json") {
    out << render_json(to_json(result));
  } else if (o.format == "csv") {
    out << export_csv(result);
  } else {
    print_text(out, result);
  }
}

int cmd_validate(const Options& o, std::ostream& out) {
  const auto doc = io::parse_model(io::read_text_file(o.model));
  auto report = bbn::validate_network(doc.network, o.normalize);
  for (const auto& s : doc.scenarios) {
    for (auto& p : io::check_scenario(doc.network, s)) {
      report.errors.push_back({bbn::Severity::fatal, "", std::move(p)});
    }
  }
  const auto& net = doc.network;
  std::size_t columns = 0, reconstructed = 0;
  std::vector<std::string> lines;
  for (const auto& n : net.nodes()) {
    const auto r = static_cast<std::size_t>(
        std::count(n.cpt.provenance.begin(), n.cpt.provenance.end(), bbn::Provenance::reconstructed));
    columns += n.cpt.provenance.size();
    reconstructed += r;
    if (r) lines.push_back("  " + n.id + ": " + std::to_string(r) + " of " + std::to_string(n.cpt.provenance.size()));
  }
  out << "model:      " << net.name() << " (" << net.size() << " nodes, " << columns
      << " CPT columns, " << doc.scenarios.size() << " scenarios)\n"
      << "hash:       " << io::network_hash(net) << "\n"
      << "provenance: " << columns - reconstructed << " paper, " << reconstructed << " reconstructed\n";
  for (const auto& l : lines) out << l << "\n";
  if (report.errors.empty()) {
    out << "findings:   none\n";
  } else {
    out << "findings:\n";
    for (const auto& f : report.errors) {
      out << "  " << (f.severity == bbn::Severity::fatal ? "error   " : "warning ")
          << (f.node.empty() ? "" : f.node + ": ") << f.message << "\n";
    }
  }
  if (!report.usable()) {
    out << "status:     invalid (" << report.fatal_count() << " fatal)\n";
    return kFailed;
  }
  out << "status:     ok\n";
  return kOk;
}

int cmd_infer(const Options& o, std::ostream& out) {
  const auto doc = io::load_model_file(o.model);
  const Scenario s{"", "", parse_evidence(o.evidence), o.targets};
  emit(out, o, run_scenario(doc.network, s, run_options(o)));
  return kOk;
}

int cmd_scenario(const Options& o, std::ostream& out) {
  const auto doc = io::load_model_file(o.model);
  const auto catalog = service::scenario_catalog(doc.scenarios);
  const auto it = std::find_if(catalog.begin(), catalog.end(),
                               [&](const Scenario& s) { return s.id == o.scenario; });
  if (it == catalog.end()) {
    std::string known;
    for (const auto& s : catalog) known += (known.empty() ? "" : ", ") + s.id;
    throw UsageError("unknown scenario '" + o.scenario + "' (known: " + known + ")");
  }
  emit(out, o, run_scenario(doc.network, *it, run_options(o)));
  return kOk;
}

int cmd_sweep(const Options& o, std::ostream& out) {
  if (o.axes.empty()) throw UsageError("sweep needs at least one --axis");
  const auto doc = io::load_model_file(o.model);
  const auto [node, state] = split_pair(o.target, "target");
  std::vector<Axis> axes;
  for (const auto& a : o.axes) axes.push_back(parse_axis(a));
  const auto fixed = parse_fixed(o.fixed, service::scenario_catalog(doc.scenarios));
  emit(out, o, sweep(doc.network, {node, state}, axes, fixed, run_options(o)));
  return kOk;
}

int cmd_gap(const Options& o, std::ostream& out) {
  const auto doc = io::load_model_file(o.model);
  const auto [node, state] = split_pair(o.target, "target");
  const auto [cnode, cstates] = split_pair(o.contrast, "contrast");
  const auto pair = split_list(cstates);
  if (pair.size() != 2) throw UsageError("--contrast expects node=worse,better");
  const auto fixed = parse_fixed(o.fixed, service::scenario_catalog(doc.scenarios));
  emit(out, o,
       condition_gap(doc.network, {node, state}, {cnode, pair[0], pair[1]}, parse_axis(o.by), fixed,
                     run_options(o)));
  return kOk;
}

int cmd_return_period(const Options& o, std::ostream& out) {
  double u = 0;
  try {
    u = climate::return_period_probability(o.T, o.r);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  if (o.format == "json") {
    out << render_json(nlohmann::json{{"T", o.T}, {"r", o.r}, {"probability", u}});
  } else if (o.format == "csv") {
    std::ostringstream t;
    t << o.T;
    out << "T,r,probability\r\n" << t.str() << "," << o.r << "," << format_probability(u) << "\r\n";
  } else {
    out << format_probability(u) << "\n";
  }
  return kOk;
}

int cmd_serve(const Options& o, std::ostream& err) {
  service::ServiceConfig config;
  config.host = o.host;
  config.port = o.port;
  config.model_path = o.model;
  config.enumeration_cap = o.enum_cap;
  if (!o.static_dir.empty()) config.static_dir = o.static_dir;
  return service::serve(config, err);
}

template <typename Fn>
int guarded(std::ostream& err, Fn&& fn) {
  try {
    return fn();
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
  } catch (const io::ModelValidationError& e) {
    err << "error: " << e.what() << "\n";
    return kFailed;
  } catch (const io::ModelError& e) {  // parse, version, I/O
    err << "error: " << e.what() << "\n";
  } catch (const bbn::InvalidReference& e) {
    err << "error: " << e.what() << "\n";
  } catch (const SpecError& e) {
    err << "error: " << e.what() << "\n";
  } catch (const bbn::ImpossibleEvidence& e) {
    err << "error: " << e.what() << "\n";
    return kFailed;
  } catch (const bbn::Error& e) {  // invalid network, state space too large
    err << "error: " << e.what() << "\n";
    return kFailed;
  }
  return kUsage;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  Options o;
  CLI::App app{"Climate risk inference for road assets with a discrete Bayesian network.", "roadrisk"};
  app.require_subcommand(1);
  app.fallthrough();
  app.add_option("--model", o.model, "model file")->capture_default_str();
  app.add_option("--format", o.format, "output format")
      ->check(CLI::IsMember({"text", "csv", "json"}))
      ->capture_default_str();

  auto engine_flags = [&o](CLI::App* sub) {
    sub->add_option("--engine", o.engine, "elim or enum")
        ->check(CLI::IsMember({"elim", "enum", "elimination", "enumeration"}))
        ->capture_default_str();
    sub->add_option("--enum-cap", o.enum_cap, "enumeration completion cap")->capture_default_str();
  };

  auto* validate = app.add_subcommand("validate", "check a model file");
  validate->add_flag("--normalize", o.normalize, "treat repairable column sums as warnings");

  auto* infer = app.add_subcommand("infer", "posteriors under evidence");
  infer->add_option("-e,--evidence", o.evidence, "node=state (repeatable)");
  infer->add_option("-t,--target", o.targets, "node to report (repeatable; default all)");
  engine_flags(infer);

  auto* scenario = app.add_subcommand("scenario", "run a preset scenario");
  scenario->add_option("id", o.scenario, "scenario id")->required();
  engine_flags(scenario);

  auto* sweep = app.add_subcommand("sweep", "posterior grid over axis states");
  sweep->add_option("--target", o.target, "node=state")->required();
  sweep->add_option("--axis", o.axes, "node or node=s1,s2 (repeatable)");
  sweep->add_option("--fixed", o.fixed, "scenario id or node=state (repeatable)");
  engine_flags(sweep);

  auto* gap = app.add_subcommand("gap", "difference between two contrast states per condition");
  gap->add_option("--target", o.target, "node=state")->required();
  gap->add_option("--contrast", o.contrast, "node=worse,better")->required();
  gap->add_option("--by", o.by, "conditioning node or node=s1,s2")->required();
  gap->add_option("--fixed", o.fixed, "scenario id or node=state (repeatable)");
  engine_flags(gap);

  auto* rp = app.add_subcommand("return-period", "occurrence probability 1 - (1 - 1/T)^r");
  rp->add_option("-T,--T", o.T, "return period in years")->required();
  rp->add_option("-r,--r", o.r, "exposure window in years")->required();

  auto* serve = app.add_subcommand("serve", "run the HTTP service");
  serve->add_option("--host", o.host)->capture_default_str();
  serve->add_option("--port", o.port)->capture_default_str();
  serve->add_option("--static-dir", o.static_dir, "directory served at /");
  serve->add_option("--enum-cap", o.enum_cap, "enumeration completion cap")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    if (code == 0) return kOk;
    if (const auto* sub = app.get_subcommands().empty() ? nullptr : app.get_subcommands().front()) {
      err << sub->help();
    }
    return kUsage;
  }

  if (validate->parsed()) return guarded(err, [&] { return cmd_validate(o, out); });
  if (infer->parsed()) return guarded(err, [&] { return cmd_infer(o, out); });
  if (scenario->parsed()) return guarded(err, [&] { return cmd_scenario(o, out); });
  if (sweep->parsed()) {
    return guarded(err, [&] {
      if (o.axes.empty()) {
        err << sweep->help();
        throw UsageError("sweep needs at least one --axis");
      }
      return cmd_sweep(o, out);
    });
  }
  if (gap->parsed()) return guarded(err, [&] { return cmd_gap(o, out); });
  if (rp->parsed()) return guarded(err, [&] { return cmd_return_period(o, out); });
  if (serve->parsed()) return guarded(err, [&] { return cmd_serve(o, err); });
  return kUsage;
}

}  // namespace roadrisk::cli
