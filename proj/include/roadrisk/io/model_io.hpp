#pragma once

#include <filesystem>
#include <map>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "roadrisk/bbn/network.hpp"
#include "roadrisk/bbn/validation.hpp"
#include "roadrisk/scenario/scenario.hpp"

namespace roadrisk::io {

inline constexpr int kFormatVersion = 1;

struct ModelDocument {
  int format_version = kFormatVersion;
  bbn::Network network;
  std::vector<Scenario> scenarios;
  // Free-form provenance annotations (usually keyed by node id).
  std::map<std::string, std::string> notes;
  // Findings from the load-time validation pass; not serialized.
  bbn::ValidationReport validation;

  friend bool operator==(const ModelDocument& a, const ModelDocument& b) {
    return a.format_version == b.format_version && a.network == b.network &&
           a.scenarios == b.scenarios && a.notes == b.notes;
  }
};

class ModelError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed JSON or a document that does not match the schema.
class ParseError : public ModelError {
 public:
  ParseError(const std::string& what, std::size_t line, std::size_t column)
      : ModelError(what), line_(line), column_(column) {}
  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }

 private:
  std::size_t line_, column_;
};

class UnsupportedVersion : public ModelError {
 public:
  using ModelError::ModelError;
};

class ModelValidationError : public ModelError {
 public:
  ModelValidationError(const std::string& what, bbn::ValidationReport report)
      : ModelError(what), report_(std::move(report)) {}
  const bbn::ValidationReport& report() const noexcept { return report_; }

 private:
  bbn::ValidationReport report_;
};

class IoError : public ModelError {
 public:
  using ModelError::ModelError;
};

// Syntax and schema only; the network may still fail validation.
ModelDocument parse_model(std::string_view text);

// parse_model followed by validate_network (normalize off) and scenario
// reference checks. Throws ModelValidationError on fatal findings.
ModelDocument load_model(std::string_view text);
ModelDocument load_model_file(const std::filesystem::path& path);
std::string read_text_file(const std::filesystem::path& path);

// Canonical form: sorted keys, nodes in declaration order, shortest
// round-trip number rendering, two-space indent, trailing newline.
std::string save_model(const ModelDocument& doc);

nlohmann::json network_to_json(const bbn::Network& net);
nlohmann::json node_to_json(const bbn::Node& node);
nlohmann::json evidence_to_json(const bbn::Evidence& ev);
nlohmann::json scenario_to_json(const Scenario& s);

// "sha256:<hex>" over the canonical serialization of the network alone.
std::string network_hash(const bbn::Network& net);

// Scenario references checked against `net`; returns problems found.
std::vector<std::string> check_scenario(const bbn::Network& net, const Scenario& s);

}  // namespace roadrisk::io
