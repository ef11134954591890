#include <doctest.h>

#include <string>

#include "fable/config.hpp"
#include "fable/error.hpp"
#include "support/temp_dir.hpp"

using namespace fable;
using fable::testing::TempDir;

namespace {

const char* kCatalogJson = R"({
  "characters": ["fox", "owl"],
  "traits": ["brave", "wise"],
  "settings": ["forest", "pond"],
  "conflicts": ["a quarrel", "a storm"],
  "resolutions": ["a truce", "a rescue"],
  "morals": ["honesty wins", "patience pays"]
})";

std::string full_config_json() {
  return R"({
    "catalog_path": "catalog.json",
    "output_dir": "runs/out",
    "chunk_size": 500,
    "max_in_flight": 2,
    "age_group": "C",
    "sample": {"target_count": 32, "seed": 9, "pair_cap_slack": 1.5, "balance_tolerance": 0.1},
    "decoding": {"temperature": 0.6, "top_p": 0.95, "max_new_tokens": 800},
    "retry": {"max_attempts": 2, "backoff_ms": [10, 20], "timeout_seconds": 30.0,
              "estimate_missing_usage": true},
    "generators": [{
      "base_url": "http://127.0.0.1:9000",
      "model_id": "gen-model",
      "auth_token_env_var": "GEN_TOKEN",
      "host_provider": "local",
      "host_gpu": "A100",
      "host_cost_per_hour": 1.8
    }],
    "judge": {"base_url": "http://127.0.0.1:9001", "model_id": "judge-model"},
    "metrics": {"max_n": 4, "sample_size": 100, "seed": 3},
    "weights": {"adherence": 0.35, "grammar": 0.20, "moral_clarity": 0.20,
                "creativity": 0.10, "self_bleu": 0.05, "distinct_1": 0.05, "flesch": 0.05},
    "pipeline_version": "9.9.9"
  })";
}

}  // namespace

TEST_CASE("a full config document loads with every section") {
  TempDir dir;
  dir.file("catalog.json", kCatalogJson);
  const auto path = dir.file("config.json", full_config_json());
  const auto config = load_config(path);

  CHECK(config.catalog_path == dir.path / "catalog.json");
  CHECK(config.output_dir == dir.path / "runs/out");
  CHECK(config.chunk_size == 500);
  CHECK(config.max_in_flight == 2);
  CHECK(config.age_group == prompt::AgeGroup::C);
  CHECK(config.plan.target_count == 32);
  CHECK(config.plan.seed == 9);
  CHECK(config.plan.pair_cap_slack == doctest::Approx(1.5));
  CHECK(config.plan.balance_tolerance == doctest::Approx(0.1));
  CHECK(config.decoding.temperature == doctest::Approx(0.6));
  CHECK(config.decoding.max_new_tokens == 800);
  CHECK(config.retry.max_attempts == 2);
  CHECK(config.retry.backoff_ms == std::vector<int>{10, 20});
  CHECK(config.retry.estimate_missing_usage);
  REQUIRE(config.generators.size() == 1);
  CHECK(config.generators[0].model_id == "gen-model");
  CHECK(config.generators[0].auth_token_env_var == "GEN_TOKEN");
  CHECK(config.generators[0].host_cost_per_hour == doctest::Approx(1.8));
  REQUIRE(config.judge.has_value());
  CHECK(config.judge->model_id == "judge-model");
  REQUIRE(config.metric_options.sample_size.has_value());
  CHECK(*config.metric_options.sample_size == 100);
  CHECK(config.weights.adherence == doctest::Approx(0.35));
  CHECK(config.pipeline_version == "9.9.9");
}

TEST_CASE("a minimal config relies on defaults") {
  TempDir dir;
  dir.file("catalog.json", kCatalogJson);
  const auto path = dir.file("config.json", R"({
    "catalog_path": "catalog.json",
    "generators": [{"base_url": "http://127.0.0.1:9000", "model_id": "m"}]
  })");
  const auto config = load_config(path);
  CHECK(config.chunk_size == 100000);
  CHECK(config.max_in_flight == 4);
  CHECK(config.age_group == prompt::AgeGroup::B);
  CHECK(config.decoding.temperature == doctest::Approx(0.7));
  CHECK(config.retry.max_attempts == 3);
  CHECK_FALSE(config.judge.has_value());
  CHECK_FALSE(config.metric_options.sample_size.has_value());
  CHECK(config.weights.flesch == doctest::Approx(0.05));
  CHECK_FALSE(config.pipeline_version.empty());
  CHECK(config.output_dir == dir.path / "out");
}

TEST_CASE("unknown keys are named in the error") {
  TempDir dir;
  dir.file("catalog.json", kCatalogJson);
  const auto path = dir.file("config.json", R"({
    "catalog_path": "catalog.json",
    "generators": [{"base_url": "http://x", "model_id": "m"}],
    "chunck_size": 10
  })");
  try {
    load_config(path);
    FAIL("expected InvalidInput");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::invalid_input);
    CHECK(std::string(e.what()).find("chunck_size") != std::string::npos);
  }
}

TEST_CASE("nested unknown keys are also rejected") {
  TempDir dir;
  dir.file("catalog.json", kCatalogJson);
  const auto path = dir.file("config.json", R"({
    "catalog_path": "catalog.json",
    "generators": [{"base_url": "http://x", "model_id": "m", "gpu": "A100"}]
  })");
  try {
    load_config(path);
    FAIL("expected InvalidInput");
  } catch (const Error& e) {
    CHECK(std::string(e.what()).find("gpu") != std::string::npos);
  }
}

TEST_CASE("generators are mandatory") {
  TempDir dir;
  dir.file("catalog.json", kCatalogJson);
  const auto none = dir.file("none.json", R"({"catalog_path": "catalog.json"})");
  CHECK_THROWS_AS(load_config(none), Error);
  const auto empty = dir.file("empty.json",
                              R"({"catalog_path": "catalog.json", "generators": []})");
  CHECK_THROWS_AS(load_config(empty), Error);
}

TEST_CASE("endpoints need an absolute base_url") {
  TempDir dir;
  dir.file("catalog.json", kCatalogJson);
  const auto path = dir.file("config.json", R"({
    "catalog_path": "catalog.json",
    "generators": [{"base_url": "localhost:9000", "model_id": "m"}]
  })");
  CHECK_THROWS_AS(load_config(path), Error);
}

TEST_CASE("a missing catalog file fails with its path") {
  TempDir dir;
  const auto path = dir.file("config.json", R"({
    "catalog_path": "nowhere.json",
    "generators": [{"base_url": "http://x", "model_id": "m"}]
  })");
  try {
    load_config(path);
    FAIL("expected InvalidInput");
  } catch (const Error& e) {
    CHECK(std::string(e.what()).find("nowhere.json") != std::string::npos);
  }
}

TEST_CASE("bad weights are rejected at load time") {
  TempDir dir;
  dir.file("catalog.json", kCatalogJson);
  const auto path = dir.file("config.json", R"({
    "catalog_path": "catalog.json",
    "generators": [{"base_url": "http://x", "model_id": "m"}],
    "weights": {"adherence": 0.9}
  })");
  CHECK_THROWS_AS(load_config(path), Error);
}

TEST_CASE("bad age groups and chunk sizes are rejected") {
  TempDir dir;
  dir.file("catalog.json", kCatalogJson);
  const auto age = dir.file("age.json", R"({
    "catalog_path": "catalog.json", "age_group": "Z",
    "generators": [{"base_url": "http://x", "model_id": "m"}]
  })");
  CHECK_THROWS_AS(load_config(age), Error);
  const auto chunk = dir.file("chunk.json", R"({
    "catalog_path": "catalog.json", "chunk_size": 0,
    "generators": [{"base_url": "http://x", "model_id": "m"}]
  })");
  CHECK_THROWS_AS(load_config(chunk), Error);
}

TEST_CASE("missing or malformed config files raise errors") {
  TempDir dir;
  CHECK_THROWS_AS(load_config(dir.path / "absent.json"), Error);
  const auto bad = dir.file("bad.json", "{{{{");
  CHECK_THROWS_AS(load_config(bad), Error);
}
