// Copyright 2026 The fedsel Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <string>

#include "doctest.h"
#include "fedsel/config.hpp"
#include "fedsel/engine.hpp"

using namespace fedsel;

namespace {

bool message_contains(const std::exception& e, const std::string& needle) {
  return std::string(e.what()).find(needle) != std::string::npos;
}

}  // namespace

TEST_CASE("empty config gives the small-network defaults") {
  const ExperimentConfig cfg = parse_config("");
  CHECK(cfg.population.K == 30);
  CHECK(cfg.population.m == 5);
  CHECK(cfg.privacy.eps_bar == 40.0);
  CHECK(cfg.privacy.eta == 0.05);
  CHECK(cfg.bandit.zeta == 1.0);
  CHECK(cfg.sa.kappa == 1.0);
  CHECK(cfg.run.seeds == std::vector<std::uint64_t>{1});
}

TEST_CASE("comments, blanks, and values parse") {
  const ExperimentConfig cfg = parse_config(
      "# heading\n"
      "\n"
      "K = 12   # trailing comment\n"
      "m = 3\n"
      "policies = sa,random\n"
      "seeds = 4,5,6\n"
      "iid = false\n");
  CHECK(cfg.population.K == 12);
  CHECK(cfg.population.m == 3);
  CHECK(cfg.run.policies ==
        std::vector<Policy>{Policy::kSa, Policy::kRandom});
  CHECK(cfg.run.seeds == std::vector<std::uint64_t>{4, 5, 6});
  CHECK_FALSE(cfg.population.iid);
}

TEST_CASE("validation errors name the key") {
  try {
    parse_config("eps_bar = -1\n");
    FAIL("expected a config error");
  } catch (const ConfigError& e) {
    CHECK(message_contains(e, "eps_bar"));
  }
}

TEST_CASE("unknown keys are rejected with their line number") {
  try {
    parse_config("K = 10\nm = 2\nbogus_key = 3\n");
    FAIL("expected a config error");
  } catch (const ConfigError& e) {
    CHECK(message_contains(e, "bogus_key"));
    CHECK(message_contains(e, "line 3"));
  }
}

TEST_CASE("malformed lines and duplicates are rejected") {
  CHECK_THROWS_AS(parse_config("K 10\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("K = 10\nK = 12\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("K = ten\n"), ConfigError);
}

TEST_CASE("unknown policy names are rejected") {
  try {
    parse_config("policies = brute,warp_drive\n");
    FAIL("expected a config error");
  } catch (const ConfigError& e) {
    CHECK(message_contains(e, "warp_drive"));
  }
}

TEST_CASE("pivot_fill under the clustered variant is rejected") {
  CHECK_THROWS_AS(parse_config("phi = clustered\npolicies = pivot_fill\n"),
                  ConfigError);
}

TEST_CASE("brute policy beyond the enumeration guard is rejected") {
  CHECK_THROWS_AS(
      parse_config("K = 300\nm = 15\ntotal_data = 6000\npolicies = brute\n"),
      ConfigError);
}

TEST_CASE("preset files load") {
  const ExperimentConfig small = load_config(CONFIG_DIR "/small.ini");
  CHECK(small.population.K == 30);
  CHECK(small.population.m == 5);
  CHECK(small.privacy.eps_bar == 40.0);

  const ExperimentConfig large = load_config(CONFIG_DIR "/large.ini");
  CHECK(large.population.K == 300);
  CHECK(large.population.m == 15);
  CHECK(large.sa.kappa == 30.0);
  CHECK(large.bandit.zeta == 3.0);
}

TEST_CASE("rendered config round-trips and reproduces the run") {
  ExperimentConfig cfg = parse_config(
      "K = 6\nm = 2\ntotal_data = 120\nnum_clusters = 2\nrounds = 20\n"
      "policies = brute,random\nseeds = 7\ntrain = false\n");
  const std::string rendered = render_config(cfg);
  const ExperimentConfig reloaded = parse_config(rendered);
  CHECK(render_config(reloaded) == rendered);
  CHECK(rounds_csv(cfg, run_experiment(cfg)) ==
        rounds_csv(reloaded, run_experiment(reloaded)));
}

TEST_CASE("missing config file reports the path") {
  try {
    load_config("/nonexistent/path.ini");
    FAIL("expected a config error");
  } catch (const ConfigError& e) {
    CHECK(message_contains(e, "/nonexistent/path.ini"));
  }
}
