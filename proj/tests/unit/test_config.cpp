#include "doctest.h"
#include "test_support.hpp"
#include "vowelkit/config.hpp"
#include "vowelkit/error.hpp"

using namespace vowelkit;
using vowelkit::testing::TempDir;
using vowelkit::testing::write_file;

TEST_SUITE("config") {

TEST_CASE("defaults as reported") {
  const nlohmann::json j = config_to_json(PipelineConfig{});
  CHECK(j["analysis_rate_hz"] == 10000);
  CHECK(j["lpc_order"] == 12);
  CHECK(j["frame_duration_s"] == 0.040);
  CHECK(j["n_filters"] == 26);
  CHECK(j["n_cep"] == 13);
  CHECK(j["preemph"] == 0.97);
  CHECK(j["high_hz"] == 5000.0);
  CHECK(j["seed"] == 42);
  CHECK(j["outlier_k_sigma"] == 1.5);
  CHECK(j["max_depth"].is_null());
  CHECK(!j.contains("jobs"));
}

TEST_CASE("set_config_value parses and validates") {
  PipelineConfig c;
  set_config_value(c, "lpc_order", "14");
  CHECK(c.formants.lpc_order == 14);
  set_config_value(c, "lpc_order", "AUTO");
  CHECK(c.formants.lpc_order == 0);
  set_config_value(c, "max_depth", "5");
  CHECK(c.tree.max_depth == 5u);
  set_config_value(c, "max_depth", "none");
  CHECK(!c.tree.max_depth);
  set_config_value(c, "stratified", "false");
  CHECK(!c.split.stratified);
  set_config_value(c, "seed", " 7 ");
  CHECK(c.split.seed == 7);
  set_config_value(c, "jobs", "3");
  CHECK(c.jobs == 3);
  CHECK_THROWS_AS(set_config_value(c, "no_such_key", "1"), Error);
  CHECK_THROWS_AS(set_config_value(c, "seed", "-1"), Error);
  CHECK_THROWS_AS(set_config_value(c, "preemph", "lots"), Error);
  CHECK_THROWS_AS(set_config_value(c, "analysis_rate_hz", "0"), Error);
  CHECK_THROWS_AS(set_config_value(c, "stratified", "maybe"), Error);
}

TEST_CASE("key=value files") {
  TempDir dir;
  write_file(dir / "c.conf", "# analysis\nanalysis_rate_hz = 8000\n\nseed=9  # trailing comment\nmfcc_multiframe = true\n");
  const PipelineConfig c = load_config(dir / "c.conf");
  CHECK(c.analysis_rate_hz == 8000);
  CHECK(c.split.seed == 9);
  CHECK(c.mfcc.multiframe);
  CHECK(config_to_json(c)["lpc_order"] == 10);

  write_file(dir / "bad.conf", "seed 9\n");
  CHECK_THROWS_AS(load_config(dir / "bad.conf"), Error);
  CHECK_THROWS_AS(load_config(dir / "missing.conf"), Error);
}

TEST_CASE("JSON files round-trip through config_to_json") {
  TempDir dir;
  write_file(dir / "c.json", R"({"n_filters": 30, "lpc_order": "auto", "max_depth": null, "train_fraction": 0.5})");
  const PipelineConfig c = load_config(dir / "c.json");
  CHECK(c.mfcc.n_filters == 30);
  CHECK(c.split.train_fraction == 0.5);

  const nlohmann::json dumped = config_to_json(c);
  write_file(dir / "again.json", dumped.dump());
  CHECK(config_to_json(load_config(dir / "again.json")) == dumped);

  write_file(dir / "broken.json", "{\"seed\": ");
  CHECK_THROWS_AS(load_config(dir / "broken.json"), Error);
}

}  // TEST_SUITE
