#include "roadrisk/service/server.hpp"

// After Eigen: <resolv.h> (pulled in by httplib) defines a `_res` macro.
#include <httplib.h>

#include <ostream>

namespace roadrisk::service {
namespace {

void send(httplib::Response& res, const Response& r) {
  res.status = r.status;
  res.set_content(r.body, r.content_type);
}

}  // namespace

bool mount(httplib::Server& server, const Api& api, const ServiceConfig& config) {
  server.set_payload_max_length(config.max_body);

  server.Get("/api/model", [&api](const httplib::Request& req, httplib::Response& res) {
    send(res, api.get_model(req.get_param_value("cpts") == "true"));
  });
  server.Post("/api/infer", [&api](const httplib::Request& req, httplib::Response& res) {
    send(res, api.infer(req.body));
  });
  server.Get("/api/scenarios", [&api](const httplib::Request&, httplib::Response& res) {
    send(res, api.scenarios());
  });
  server.Post(R"(/api/scenarios/([^/]+)/run)",
              [&api](const httplib::Request& req, httplib::Response& res) {
                send(res, api.run_scenario(req.matches[1].str()));
              });
  server.Post("/api/sweep", [&api](const httplib::Request& req, httplib::Response& res) {
    send(res, api.sweep(req.body));
  });
  server.Get("/healthz", [&api](const httplib::Request&, httplib::Response& res) {
    send(res, api.healthz());
  });

  // Transport-level failures (unknown route, oversized payload) get the same
  // JSON error shape as handler errors.
  server.set_error_handler([](const httplib::Request& req, httplib::Response& res) {
    if (!res.body.empty()) return httplib::Server::HandlerResponse::Unhandled;
    if (res.status == 413) {
      send(res, error_response(413, "payload_too_large", "request body exceeds the configured limit"));
    } else {
      send(res, error_response(res.status, res.status == 404 ? "not_found" : "http_error",
                               req.method + " " + req.path));
    }
    return httplib::Server::HandlerResponse::Handled;
  });

  if (config.static_dir) return server.set_mount_point("/", config.static_dir->string());
  return true;
}

int serve(const ServiceConfig& config, std::ostream& log) {
  io::ModelDocument doc;
  try {
    doc = io::load_model_file(config.model_path);
  } catch (const std::exception& e) {
    log << "serve: refusing to start: " << e.what() << "\n";
    return 2;
  }
  RunOptions options;
  if (config.enumeration_cap) options.enumeration_cap = *config.enumeration_cap;
  const Api api(std::move(doc), options, config.max_body);

  httplib::Server server;
  if (!mount(server, api, config)) {
    log << "serve: static directory '" << config.static_dir->string() << "' not found\n";
    return 2;
  }
  if (!server.bind_to_port(config.host, config.port)) {
    log << "serve: cannot bind " << config.host << ":" << config.port << "\n";
    return 2;
  }
  log << "serving " << api.network().name() << " (" << api.model_hash() << ") on http://"
      << config.host << ":" << config.port << "\n";
  log.flush();
  return server.listen_after_bind() ? 0 : 2;
}

}  // namespace roadrisk::service
