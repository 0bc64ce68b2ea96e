#include <set>
#include <sstream>
#include <thread>

#include <gtest/gtest.h>

#include "../support/builders.hpp"
#include "roadrisk/scenario/json.hpp"
#include "roadrisk/service/api.hpp"
#include "roadrisk/service/server.hpp"

// After Eigen: <resolv.h> (pulled in by httplib) defines a `_res` macro.
#include <httplib.h>

namespace roadrisk::service {
namespace {

using nlohmann::json;
using testing::binary;

const Api& danish_api() {
  static const Api api(io::load_model_file(ROADRISK_MODEL_FILE));
  return api;
}

double posterior(const json& report, const std::string& node, std::size_t state = 0) {
  for (const auto& p : report["posteriors"]) {
    if (p["node"] == node) return p["probabilities"][state].get<double>();
  }
  ADD_FAILURE() << "no posterior for " << node;
  return -1;
}

// rain is certain and forces flooding; flooding=no has probability 0.
Api deterministic_api() {
  io::ModelDocument doc;
  doc.network = bbn::Network("det", {binary("rain", {}, {1.0}), binary("flooding", {"rain"}, {1.0, 0.0}),
                                     binary("damage", {"flooding"}, {0.7, 0.1})});
  return Api(std::move(doc));
}

TEST(ApiModel, DescribesNodesWithoutProbabilities) {
  const auto r = danish_api().get_model(false);
  ASSERT_EQ(r.status, 200);
  const auto j = json::parse(r.body);
  EXPECT_EQ(j["nodes"].size(), 28u);
  EXPECT_EQ(j["hash"], danish_api().model_hash());
  EXPECT_FALSE(j["nodes"][0].contains("cpt"));
  EXPECT_EQ(j["provenance"]["reconstructed"], 30);
  EXPECT_EQ(j["provenance"]["nodes_with_reconstructed"].size(), 5u);
}

TEST(ApiModel, CptsOnRequestMatchTheFile) {
  const auto j = json::parse(danish_api().get_model(true).body);
  const auto file = json::parse(io::read_text_file(ROADRISK_MODEL_FILE));
  for (std::size_t i = 0; i < 28; ++i) EXPECT_EQ(j["nodes"][i]["cpt"], file["nodes"][i]["cpt"]);
}

TEST(ApiInfer, EmptyEvidenceGivesAllPosteriors) {
  const auto r = danish_api().infer("{}");
  ASSERT_EQ(r.status, 200);
  const auto j = json::parse(r.body);
  EXPECT_EQ(j["posteriors"].size(), 28u);
  EXPECT_EQ(j["model"]["hash"], danish_api().model_hash());
  EXPECT_EQ(danish_api().infer("").body, r.body);
}

TEST(ApiInfer, EvidenceIsEchoedAndPointMass) {
  const auto j = json::parse(danish_api().infer(R"({"evidence": {"flooding": "yes"}})").body);
  EXPECT_EQ(j["evidence"]["flooding"], "yes");
  EXPECT_EQ(posterior(j, "flooding", 0), 1.0);
  EXPECT_EQ(posterior(j, "flooding", 1), 0.0);
}

TEST(ApiInfer, ErrorStatuses) {
  const auto unknown_node = danish_api().infer(R"({"evidence": {"flood": "yes"}})");
  EXPECT_EQ(unknown_node.status, 400);
  EXPECT_NE(unknown_node.body.find("flood"), std::string::npos);
  const auto unknown_state = danish_api().infer(R"({"evidence": {"flooding": "maybe"}})");
  EXPECT_EQ(unknown_state.status, 400);
  EXPECT_NE(unknown_state.body.find("maybe"), std::string::npos);
  EXPECT_EQ(danish_api().infer("{not json").status, 400);
  EXPECT_EQ(danish_api().infer(R"({"evidence": {}, "bogus": 1})").status, 400);

  const auto body = json::parse(unknown_node.body);
  EXPECT_TRUE(body.contains("error"));
  EXPECT_TRUE(body.contains("detail"));

  EXPECT_EQ(deterministic_api().infer(R"({"evidence": {"flooding": "no"}})").status, 422);

  const Api small(io::ModelDocument{io::kFormatVersion, deterministic_api().network(), {}, {}, {}},
                  {}, 16);
  EXPECT_EQ(small.infer(R"({"evidence": {"flooding": "yes"}})").status, 413);
}

TEST(ApiScenarios, ListAndRun) {
  const auto list = json::parse(danish_api().scenarios().body)["scenarios"];
  std::set<std::string> ids;
  for (const auto& s : list) ids.insert(s["id"].get<std::string>());
  for (const char* id : {"baseline", "worst_case_roots", "worst_case_full"}) EXPECT_TRUE(ids.count(id));

  const auto run = danish_api().run_scenario("worst_case_full");
  ASSERT_EQ(run.status, 200);
  const auto j = json::parse(run.body);
  EXPECT_EQ(j["scenario"], "worst_case_full");
  EXPECT_EQ(j["posteriors"].size(), 2u);
  EXPECT_EQ(danish_api().run_scenario("nope").status, 404);
}

TEST(ApiScenarios, BuiltinsAvailableWithoutModelScenarios) {
  const auto api = deterministic_api();
  const auto list = json::parse(api.scenarios().body)["scenarios"];
  EXPECT_EQ(list.size(), 3u);
  EXPECT_EQ(list[0]["source"], "builtin");
  // Built-in presets reference nodes this model lacks.
  EXPECT_EQ(api.run_scenario("worst_case_roots").status, 400);
}

TEST(ApiSweep, BridgeGridAndLimits) {
  const auto r = danish_api().sweep(R"({
    "target": {"node": "collapse_of_culvert_bridge", "state": "yes"},
    "axes": [{"node": "blue_spot"}, {"node": "bridge_condition"}],
    "fixed": {"extreme_precipitation": "yes", "extreme_temperature": "yes",
              "sea_level_rise": "yes", "zero_crossing": "yes"}})");
  ASSERT_EQ(r.status, 200) << r.body;
  EXPECT_EQ(json::parse(r.body)["cells"].size(), 15u);

  // 2^10 * 3 * 5 * 3 = 46080 cells.
  json big{{"target", "collapse_of_culvert_bridge=yes"}, {"axes", json::array()}};
  for (const char* n : {"mudslides", "early_melting_of_snow", "flooding", "sediment_deposition",
                        "hydraulic_capacity_shortage", "scouring_at_bridge_culvert",
                        "increase_in_thermal_strain", "culvert_clogging", "overtopping",
                        "pavement_damage", "blue_spot", "bridge_condition", "road_condition"}) {
    big["axes"].push_back(n);
  }
  EXPECT_EQ(danish_api().sweep(big.dump()).status, 422);
  EXPECT_EQ(danish_api().sweep(R"({"target": "collapse_of_culvert_bridge=yes", "axes": []})").status, 400);
  EXPECT_EQ(danish_api().sweep(R"({"target": "collapse_of_culvert_bridge=yes", "axes": ["nope"]})").status,
            400);
}

TEST(ApiSweep, ExactlyTenThousandAndOneCellsIsRejected) {
  // A single axis with 10001 states.
  std::vector<std::string> states;
  for (int i = 0; i < 10001; ++i) states.push_back("s" + std::to_string(i));
  std::vector<double> prior(10001, 1.0 / 10001);
  io::ModelDocument doc;
  doc.network = bbn::Network("wide", {testing::categorical("a", states, {}, {prior}),
                                      binary("b", {}, {0.5})});
  const Api api(std::move(doc), {}, 1 << 22);
  const auto r = api.sweep(R"({"target": "b=yes", "axes": ["a"]})");
  EXPECT_EQ(r.status, 422) << r.body.substr(0, 200);
  EXPECT_NE(r.body.find("10001"), std::string::npos);
}

TEST(ApiSweep, SingleCellEqualsInfer) {
  const auto sweep = json::parse(danish_api().sweep(R"({"target": "road_deterioration=yes",
    "axes": [{"node": "road_condition", "states": ["poor"]}], "fixed": {"flooding": "yes"}})").body);
  const auto infer = json::parse(
      danish_api().infer(R"({"evidence": {"flooding": "yes", "road_condition": "poor"}})").body);
  EXPECT_EQ(sweep["cells"][0]["probability"].get<double>(), posterior(infer, "road_deterioration"));
}

TEST(ApiStateless, RepeatedRequestsAreIdentical) {
  const std::string body = R"({"evidence": {"blue_spot": "high"}})";
  EXPECT_EQ(danish_api().infer(body).body, danish_api().infer(body).body);
}

class HttpServer : public ::testing::Test {
 protected:
  void SetUp() override {
    ASSERT_TRUE(mount(server_, danish_api(), config_));
    port_ = server_.bind_to_any_port("127.0.0.1");
    ASSERT_GT(port_, 0);
    thread_ = std::thread([this] { server_.listen_after_bind(); });
    server_.wait_until_ready();
  }
  void TearDown() override {
    server_.stop();
    if (thread_.joinable()) thread_.join();
  }

  httplib::Client client() const { return httplib::Client("127.0.0.1", port_); }

  ServiceConfig config_;
  httplib::Server server_;
  int port_ = 0;
  std::thread thread_;
};

TEST_F(HttpServer, EndToEnd) {
  auto cli = client();
  auto health = cli.Get("/healthz");
  ASSERT_TRUE(health);
  EXPECT_EQ(health->status, 200);
  EXPECT_EQ(json::parse(health->body)["model"]["hash"], danish_api().model_hash());

  auto model = cli.Get("/api/model?cpts=true");
  ASSERT_TRUE(model);
  EXPECT_TRUE(json::parse(model->body)["nodes"][0].contains("cpt"));
  EXPECT_EQ(model->get_header_value("Content-Type"), "application/json");

  auto infer = cli.Post("/api/infer", R"({"evidence": {"zero_crossing": "yes"}})", "application/json");
  ASSERT_TRUE(infer);
  EXPECT_EQ(infer->status, 200);
  EXPECT_EQ(infer->body, danish_api().infer(R"({"evidence": {"zero_crossing": "yes"}})").body);

  auto bad = cli.Post("/api/infer", R"({"evidence": {"nope": "yes"}})", "application/json");
  ASSERT_TRUE(bad);
  EXPECT_EQ(bad->status, 400);

  auto run = cli.Post("/api/scenarios/worst_case_full/run", "", "application/json");
  ASSERT_TRUE(run);
  EXPECT_EQ(run->status, 200);
  EXPECT_EQ(run->body, danish_api().run_scenario("worst_case_full").body);
  auto missing = cli.Post("/api/scenarios/nope/run", "", "application/json");
  ASSERT_TRUE(missing);
  EXPECT_EQ(missing->status, 404);

  auto route = cli.Get("/api/unknown");
  ASSERT_TRUE(route);
  EXPECT_EQ(route->status, 404);
  EXPECT_EQ(json::parse(route->body)["error"], "not_found");
}

TEST_F(HttpServer, OversizedBodyIs413) {
  auto cli = client();
  const std::string huge(kDefaultMaxBody + 10, ' ');
  auto r = cli.Post("/api/infer", huge, "application/json");
  ASSERT_TRUE(r);
  EXPECT_EQ(r->status, 413);
}

TEST(Serve, InvalidModelRefusesToStart) {
  ServiceConfig config;
  config.model_path = "/nonexistent/model.json";
  std::ostringstream log;
  EXPECT_EQ(serve(config, log), 2);
  EXPECT_NE(log.str().find("refusing"), std::string::npos);
}

}  // namespace
}  // namespace roadrisk::service
