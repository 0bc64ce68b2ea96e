#include <filesystem>
#include <fstream>
#include <sstream>

#include <gtest/gtest.h>

#include "roadrisk/cli/cli.hpp"
#include "roadrisk/io/model_io.hpp"
#include "roadrisk/service/api.hpp"

namespace roadrisk::cli {
namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args, bool with_model = true) {
  std::vector<std::string> full{"roadrisk"};
  if (with_model) {
    full.push_back("--model");
    full.push_back(ROADRISK_MODEL_FILE);
  }
  full.insert(full.end(), args.begin(), args.end());
  std::vector<const char*> argv;
  for (const auto& a : full) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::filesystem::path write_temp(const std::string& name, const std::string& text) {
  const auto path = std::filesystem::temp_directory_path() / name;
  std::ofstream(path, std::ios::binary) << text;
  return path;
}

double posterior(const nlohmann::json& report, const std::string& node) {
  for (const auto& p : report["posteriors"]) {
    if (p["node"] == node) return p["probabilities"][0].get<double>();
  }
  return -1;
}

TEST(CliValidate, ShippedModelIsValid) {
  const auto r = run({"validate"});
  EXPECT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("30 reconstructed"), std::string::npos) << r.out;
  EXPECT_NE(r.out.find("flooding: 24 of 24"), std::string::npos);
}

TEST(CliValidate, CycleIsExitOneNamingIt) {
  const auto path = write_temp("roadrisk_cycle.model", R"({"format_version": 1, "nodes": [
    {"id": "a", "states": ["yes", "no"], "parents": ["b"],
     "cpt": {"columns": [[0.5, 0.5], [0.5, 0.5]], "provenance": ["paper", "paper"]}},
    {"id": "b", "states": ["yes", "no"], "parents": ["a"],
     "cpt": {"columns": [[0.5, 0.5], [0.5, 0.5]], "provenance": ["paper", "paper"]}}]})");
  const auto r = run({"--model", path.string(), "validate"}, false);
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.out.find("cycle"), std::string::npos) << r.out;
}

TEST(CliValidate, NormalizeTurnsRepairableSumsIntoWarnings) {
  const auto path = write_temp("roadrisk_sum.model", R"({"format_version": 1, "nodes": [
    {"id": "road_condition", "states": ["good", "fair", "poor"], "parents": [],
     "cpt": {"columns": [[0.57, 0.57, 0.07]], "provenance": ["reconstructed"]}}]})");
  EXPECT_EQ(run({"--model", path.string(), "validate"}, false).code, 1);
  const auto r = run({"--model", path.string(), "validate", "--normalize"}, false);
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("rescaled"), std::string::npos) << r.out;
}

TEST(CliValidate, MissingOrMalformedFileIsExitTwo) {
  EXPECT_EQ(run({"--model", "/nonexistent/x.model", "validate"}, false).code, 2);
  const auto bad = write_temp("roadrisk_bad.model", "{\"format_version\": 1,");
  EXPECT_EQ(run({"--model", bad.string(), "validate"}, false).code, 2);
}

TEST(CliInfer, BaselineTableIncludesOutcomes) {
  const auto r = run({"infer"});
  EXPECT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("road_deterioration"), std::string::npos);
  EXPECT_NE(r.out.find("collapse_of_culvert_bridge"), std::string::npos);
}

TEST(CliInfer, EnumerationMatchesElimination) {
  const std::vector<std::string> common{"--format", "json", "infer", "-e", "extreme_precipitation=yes",
                                        "-e",       "zero_crossing=no", "-e", "blue_spot=high",
                                        "-t",       "road_deterioration", "-t", "collapse_of_culvert_bridge"};
  auto elim_args = common;
  auto enum_args = common;
  enum_args.insert(enum_args.end(), {"--engine", "enum", "--enum-cap", "1000000000"});
  const auto elim = nlohmann::json::parse(run(elim_args).out);
  const auto enumd = nlohmann::json::parse(run(enum_args).out);
  EXPECT_EQ(enumd["engine"], "enumeration");
  for (const char* n : {"road_deterioration", "collapse_of_culvert_bridge"}) {
    EXPECT_NEAR(posterior(elim, n), posterior(enumd, n), 1e-9);
  }
}

TEST(CliInfer, BadReferencesAndImpossibleEvidence) {
  EXPECT_EQ(run({"infer", "--evidence", "nonexistent=yes"}).code, 2);
  EXPECT_EQ(run({"infer", "--evidence", "flooding=maybe"}).code, 2);
  EXPECT_EQ(run({"infer", "--evidence", "flooding"}).code, 2);
  // early_melting_of_snow is impossible without extreme temperature.
  const auto r = run({"infer", "-e", "extreme_temperature=no", "-e", "early_melting_of_snow=yes"});
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.err.find("impossible"), std::string::npos);
  EXPECT_EQ(run({"infer", "--engine", "enum"}).code, 1);  // default cap is too small
}

TEST(CliScenario, JsonMatchesServiceBytes) {
  const auto r = run({"--format", "json", "scenario", "worst_case_full"});
  ASSERT_EQ(r.code, 0) << r.err;
  const service::Api api(io::load_model_file(ROADRISK_MODEL_FILE));
  EXPECT_EQ(r.out, api.run_scenario("worst_case_full").body);
  EXPECT_EQ(run({"scenario", "nope"}).code, 2);
}

TEST(CliScenario, ApiParityOnInfer) {
  const auto cli = nlohmann::json::parse(run({"--format", "json", "infer", "-e", "blue_spot=low"}).out);
  const service::Api api(io::load_model_file(ROADRISK_MODEL_FILE));
  const auto http = nlohmann::json::parse(api.infer(R"({"evidence": {"blue_spot": "low"}})").body);
  ASSERT_EQ(cli["posteriors"].size(), http["posteriors"].size());
  for (std::size_t i = 0; i < cli["posteriors"].size(); ++i) {
    const auto& a = cli["posteriors"][i]["probabilities"];
    const auto& b = http["posteriors"][i]["probabilities"];
    for (std::size_t s = 0; s < a.size(); ++s) EXPECT_NEAR(a[s].get<double>(), b[s].get<double>(), 1e-12);
  }
}

TEST(CliSweep, CsvGridAndUsage) {
  const auto r = run({"--format", "csv", "sweep", "--target", "collapse_of_culvert_bridge=yes",
                      "--axis", "blue_spot", "--axis", "bridge_condition", "--fixed", "worst_case_roots"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(std::count(r.out.begin(), r.out.end(), '\n'), 16);
  EXPECT_EQ(r.out, run({"--format", "csv", "sweep", "--target", "collapse_of_culvert_bridge=yes",
                        "--axis", "blue_spot", "--axis", "bridge_condition", "--fixed",
                        "worst_case_roots"}).out);
  const auto none = run({"sweep", "--target", "collapse_of_culvert_bridge=yes"});
  EXPECT_EQ(none.code, 2);
  EXPECT_NE(none.err.find("Usage"), std::string::npos);
  EXPECT_EQ(run({"sweep", "--target", "collapse_of_culvert_bridge=yes", "--axis", "blue_spot",
                 "--fixed", "no_such_scenario"}).code,
            2);
}

TEST(CliGap, BridgeConditionGap) {
  const auto r = run({"--format", "json", "gap", "--target", "collapse_of_culvert_bridge=yes",
                      "--contrast", "bridge_condition=g5,g1", "--by", "blue_spot", "--fixed",
                      "worst_case_roots"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_EQ(j["rows"].size(), 3u);
  EXPECT_TRUE(j["mean_gap"].is_number());
  EXPECT_EQ(run({"gap", "--target", "collapse_of_culvert_bridge=yes", "--contrast", "bridge_condition=g5",
                 "--by", "blue_spot"}).code,
            2);
}

TEST(CliReturnPeriod, Values) {
  auto r = run({"return-period", "--T", "100", "--r", "100"}, false);
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out, "0.633968\n");
  EXPECT_EQ(run({"return-period", "--T", "1", "--r", "7"}, false).out, "1.000000\n");
  EXPECT_EQ(run({"return-period", "--T", "0", "--r", "5"}, false).code, 2);
  EXPECT_EQ(run({"return-period", "--T", "10", "--r", "-1"}, false).code, 2);
}

TEST(CliUsage, HelpAndUnknownSubcommand) {
  EXPECT_EQ(run({"--help"}, false).code, 0);
  EXPECT_EQ(run({}, false).code, 2);
  EXPECT_EQ(run({"frobnicate"}, false).code, 2);
  EXPECT_EQ(run({"--format", "xml", "infer"}).code, 2);
}

TEST(CliServe, InvalidModelRefusesToStart) {
  const auto r = run({"--model", "/nonexistent/x.model", "serve", "--port", "0"}, false);
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("refusing"), std::string::npos);
}

}  // namespace
}  // namespace roadrisk::cli
