#include "roadrisk/io/model_io.hpp"

#include <openssl/evp.h>

#include <fstream>
#include <set>
#include <sstream>

namespace roadrisk::io {
namespace {

using nlohmann::json;

[[noreturn]] void schema_error(const std::string& where, const std::string& what) {
  throw ParseError("schema error at " + where + ": " + what, 0, 0);
}

void require_keys(const json& obj, const std::string& where, std::set<std::string> required,
                  const std::set<std::string>& optional) {
  if (!obj.is_object()) schema_error(where, "expected an object");
  for (const auto& [key, _] : obj.items()) {
    if (!required.erase(key) && !optional.count(key)) schema_error(where, "unknown key '" + key + "'");
  }
  if (!required.empty()) schema_error(where, "missing key '" + *required.begin() + "'");
}

std::string get_string(const json& obj, const std::string& key, const std::string& where) {
  const auto& v = obj.at(key);
  if (!v.is_string()) schema_error(where + "." + key, "expected a string");
  return v.get<std::string>();
}

std::vector<std::string> get_strings(const json& v, const std::string& where) {
  if (!v.is_array()) schema_error(where, "expected an array of strings");
  std::vector<std::string> out;
  for (const auto& s : v) {
    if (!s.is_string()) schema_error(where, "expected an array of strings");
    out.push_back(s.get<std::string>());
  }
  return out;
}

std::map<std::string, std::string> get_string_map(const json& v, const std::string& where) {
  if (!v.is_object()) schema_error(where, "expected an object of strings");
  std::map<std::string, std::string> out;
  for (const auto& [k, s] : v.items()) {
    if (!s.is_string()) schema_error(where + "." + k, "expected a string");
    out.emplace(k, s.get<std::string>());
  }
  return out;
}

bbn::Cpt parse_cpt(const json& v, const std::string& where) {
  require_keys(v, where, {"columns", "provenance"}, {});
  const auto& cols = v.at("columns");
  if (!cols.is_array()) schema_error(where + ".columns", "expected an array of columns");
  std::vector<std::vector<double>> columns;
  for (std::size_t j = 0; j < cols.size(); ++j) {
    const std::string at = where + ".columns[" + std::to_string(j) + "]";
    if (!cols[j].is_array()) schema_error(at, "expected an array of numbers");
    std::vector<double> column;
    for (const auto& p : cols[j]) {
      if (!p.is_number()) schema_error(at, "expected a number");
      column.push_back(p.get<double>());
    }
    if (!columns.empty() && column.size() != columns.front().size()) {
      schema_error(at, "column length differs from column 0");
    }
    columns.push_back(std::move(column));
  }
  bbn::Cpt cpt = bbn::Cpt::from_columns(columns);
  cpt.provenance.clear();
  for (const auto& tag : get_strings(v.at("provenance"), where + ".provenance")) {
    const auto p = bbn::parse_provenance(tag);
    if (!p) schema_error(where + ".provenance", "unknown provenance tag '" + tag + "'");
    cpt.provenance.push_back(*p);
  }
  return cpt;
}

bbn::Node parse_node(const json& v, const std::string& where) {
  require_keys(v, where, {"id", "states", "parents", "cpt"}, {"label"});
  bbn::Node node;
  node.id = get_string(v, "id", where);
  node.label = v.contains("label") ? get_string(v, "label", where) : node.id;
  node.states = get_strings(v.at("states"), where + ".states");
  node.parents = get_strings(v.at("parents"), where + ".parents");
  node.cpt = parse_cpt(v.at("cpt"), where + ".cpt");
  return node;
}

Scenario parse_scenario(const json& v, const std::string& where) {
  require_keys(v, where, {"id", "evidence"}, {"label", "targets"});
  Scenario s;
  s.id = get_string(v, "id", where);
  s.label = v.contains("label") ? get_string(v, "label", where) : s.id;
  s.evidence = bbn::Evidence(get_string_map(v.at("evidence"), where + ".evidence"));
  if (v.contains("targets")) s.targets = get_strings(v.at("targets"), where + ".targets");
  return s;
}

std::pair<std::size_t, std::size_t> line_column(std::string_view text, std::size_t byte) {
  std::size_t line = 1, col = 1;
  for (std::size_t i = 0; i + 1 < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return {line, col};
}

json cpt_to_json(const bbn::Cpt& cpt) {
  json cols = json::array();
  for (Eigen::Index j = 0; j < cpt.table.cols(); ++j) {
    json col = json::array();
    for (Eigen::Index i = 0; i < cpt.table.rows(); ++i) col.push_back(cpt.table(i, j));
    cols.push_back(std::move(col));
  }
  json tags = json::array();
  for (auto p : cpt.provenance) tags.push_back(std::string(bbn::to_string(p)));
  return json{{"columns", std::move(cols)}, {"provenance", std::move(tags)}};
}

}  // namespace

ModelDocument parse_model(std::string_view text) {
  json root;
  try {
    root = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    const auto [line, col] = line_column(text, e.byte);
    throw ParseError("malformed JSON at line " + std::to_string(line) + ", column " +
                         std::to_string(col) + ": " + e.what(),
                     line, col);
  }
  require_keys(root, "document", {"format_version", "nodes"},
               {"name", "scenarios", "notes", "metadata"});
  const auto& version = root.at("format_version");
  if (!version.is_number_integer()) schema_error("format_version", "expected an integer");
  ModelDocument doc;
  doc.format_version = version.get<int>();
  if (doc.format_version != kFormatVersion) {
    throw UnsupportedVersion("unsupported format_version " + std::to_string(doc.format_version) +
                             " (supported: " + std::to_string(kFormatVersion) + ")");
  }

  const std::string name = root.contains("name") ? get_string(root, "name", "document") : "";
  const auto& nodes = root.at("nodes");
  if (!nodes.is_array()) schema_error("nodes", "expected an array");
  std::vector<bbn::Node> parsed;
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    parsed.push_back(parse_node(nodes[i], "nodes[" + std::to_string(i) + "]"));
  }
  bbn::Metadata metadata;
  if (root.contains("metadata")) metadata = get_string_map(root.at("metadata"), "metadata");
  doc.network = bbn::Network(name, std::move(parsed), std::move(metadata));

  if (root.contains("scenarios")) {
    const auto& sc = root.at("scenarios");
    if (!sc.is_array()) schema_error("scenarios", "expected an array");
    for (std::size_t i = 0; i < sc.size(); ++i) {
      doc.scenarios.push_back(parse_scenario(sc[i], "scenarios[" + std::to_string(i) + "]"));
    }
  }
  if (root.contains("notes")) doc.notes = get_string_map(root.at("notes"), "notes");
  return doc;
}

std::vector<std::string> check_scenario(const bbn::Network& net, const Scenario& s) {
  std::vector<std::string> problems;
  for (const auto& [node, state] : s.evidence.assignments()) {
    const auto i = net.find(node);
    if (!i) {
      problems.push_back("scenario '" + s.id + "' references unknown node '" + node + "'");
    } else if (!net[*i].state_index(state)) {
      problems.push_back("scenario '" + s.id + "' references unknown state '" + state +
                         "' of node '" + node + "'");
    }
  }
  for (const auto& t : s.targets) {
    if (!net.find(t)) {
      problems.push_back("scenario '" + s.id + "' targets unknown node '" + t + "'");
    }
  }
  return problems;
}

ModelDocument load_model(std::string_view text) {
  ModelDocument doc = parse_model(text);
  doc.validation = bbn::validate_network(doc.network, false);
  std::set<std::string> ids;
  for (const auto& s : doc.scenarios) {
    if (!ids.insert(s.id).second) {
      doc.validation.errors.push_back({bbn::Severity::fatal, "", "duplicate scenario id '" + s.id + "'"});
    }
    for (auto& problem : check_scenario(doc.network, s)) {
      doc.validation.errors.push_back({bbn::Severity::fatal, "", std::move(problem)});
    }
  }
  if (!doc.validation.usable()) {
    std::string msg = "model failed validation:";
    for (const auto& f : doc.validation.errors) {
      if (f.severity != bbn::Severity::fatal) continue;
      msg += "\n  " + (f.node.empty() ? std::string() : f.node + ": ") + f.message;
    }
    throw ModelValidationError(msg, doc.validation);
  }
  return doc;
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open model file '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  if (in.bad()) throw IoError("error reading model file '" + path.string() + "'");
  return ss.str();
}

ModelDocument load_model_file(const std::filesystem::path& path) {
  return load_model(read_text_file(path));
}

json node_to_json(const bbn::Node& node) {
  return json{{"id", node.id},          {"label", node.label},
              {"states", node.states},  {"parents", node.parents},
              {"cpt", cpt_to_json(node.cpt)}};
}

json network_to_json(const bbn::Network& net) {
  json nodes = json::array();
  for (const auto& n : net.nodes()) nodes.push_back(node_to_json(n));
  json out{{"name", net.name()}, {"nodes", std::move(nodes)}};
  if (!net.metadata().empty()) out["metadata"] = net.metadata();
  return out;
}

json evidence_to_json(const bbn::Evidence& ev) {
  json out = json::object();
  for (const auto& [node, state] : ev.assignments()) out[node] = state;
  return out;
}

json scenario_to_json(const Scenario& s) {
  return json{{"id", s.id},
              {"label", s.label},
              {"evidence", evidence_to_json(s.evidence)},
              {"targets", s.targets}};
}

std::string save_model(const ModelDocument& doc) {
  json root = network_to_json(doc.network);
  root["format_version"] = doc.format_version;
  json scenarios = json::array();
  for (const auto& s : doc.scenarios) scenarios.push_back(scenario_to_json(s));
  root["scenarios"] = std::move(scenarios);
  root["notes"] = doc.notes;
  return root.dump(2) + "\n";
}

std::string network_hash(const bbn::Network& net) {
  const std::string bytes = network_to_json(net).dump();
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), digest, &len, EVP_sha256(), nullptr) != 1) {
    throw ModelError("SHA-256 digest failed");
  }
  static constexpr char hex[] = "0123456789abcdef";
  std::string out = "sha256:";
  for (unsigned int i = 0; i < len; ++i) {
    out += hex[digest[i] >> 4];
    out += hex[digest[i] & 0xf];
  }
  return out;
}

}  // namespace roadrisk::io
