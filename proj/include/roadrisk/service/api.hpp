#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "roadrisk/io/model_io.hpp"
#include "roadrisk/scenario/engine.hpp"

namespace roadrisk::service {

inline constexpr std::size_t kMaxSweepCells = 10'000;
inline constexpr std::size_t kDefaultMaxBody = 1 << 20;

struct Response {
  int status = 200;
  std::string body;
  std::string content_type = "application/json";
};

// Transport-free request handlers over one immutable model. All methods are
// const and safe to call concurrently.
class Api {
 public:
  Api(io::ModelDocument doc, RunOptions options = {}, std::size_t max_body = kDefaultMaxBody);

  Response get_model(bool include_cpts) const;
  Response infer(std::string_view body) const;
  Response scenarios() const;
  Response run_scenario(std::string_view id) const;
  Response sweep(std::string_view body) const;
  Response healthz() const;

  const bbn::Network& network() const noexcept { return doc_.network; }
  const std::string& model_hash() const noexcept { return hash_; }
  // Model-file scenarios followed by built-in presets not overridden by id.
  const std::vector<Scenario>& scenario_list() const noexcept { return scenarios_; }

 private:
  template <typename Fn>
  Response guarded(std::string_view body, Fn&& fn) const;

  io::ModelDocument doc_;
  RunOptions options_;
  std::size_t max_body_;
  std::string hash_;
  std::vector<Scenario> scenarios_;
};

Response error_response(int status, std::string error, std::string detail);

// Model-file scenarios followed by the built-in presets whose ids the file
// does not already use.
std::vector<Scenario> scenario_catalog(const std::vector<Scenario>& from_model);

}  // namespace roadrisk::service
