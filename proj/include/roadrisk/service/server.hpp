#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>

#include "roadrisk/service/api.hpp"

namespace httplib {
class Server;
}

namespace roadrisk::service {

struct ServiceConfig {
  std::string host = "127.0.0.1";
  int port = 8080;
  std::filesystem::path model_path = "danish_road_climate.model";
  std::optional<std::uint64_t> enumeration_cap;
  std::optional<std::filesystem::path> static_dir;
  std::size_t max_body = kDefaultMaxBody;
};

// Registers the API routes (and the static mount, if any) on `server`.
// Returns false if the static directory cannot be mounted.
bool mount(httplib::Server& server, const Api& api, const ServiceConfig& config);

// Loads the model, binds and blocks serving. Returns 2 if the model is
// invalid or the port cannot be bound.
int serve(const ServiceConfig& config, std::ostream& log);

}  // namespace roadrisk::service
