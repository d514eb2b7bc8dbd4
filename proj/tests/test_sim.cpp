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

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

#include "doctest.h"
#include "fedsel/engine.hpp"
#include "fedsel/numerics.hpp"
#include "fedsel/toy_model.hpp"

using namespace fedsel;

namespace {

ExperimentConfig tiny_config() {
  ExperimentConfig cfg;
  cfg.population.K = 6;
  cfg.population.m = 2;
  cfg.population.total_data = 120;
  cfg.population.num_clusters = 2;
  cfg.reward.alpha = 0.0;
  cfg.reward.gamma = 0.0;
  cfg.toy.train = false;
  cfg.run.rounds = 50;
  cfg.run.policies = {Policy::kBrute};
  return cfg;
}

}  // namespace

TEST_CASE("population synthesis, small and large presets") {
  PopulationConfig small;  // defaults: K = 30, m = 5
  Rng rng(1);
  const Population pop = synthesize_population(small, rng);
  CHECK(pop.K() == 30);
  long total = 0;
  for (const auto& u : pop.users) {
    CHECK(u.data_size >= 1);
    CHECK(u.latency_mean >= pop.tau_min);
    CHECK(u.cluster >= 1);
    CHECK(u.cluster <= small.num_clusters);
    total += u.data_size;
  }
  CHECK(total == pop.total_data);
  // i.i.d. mode: equal shares.
  CHECK(pop.users.front().data_size == pop.users.back().data_size);
  // Two tiers: first half faster in expectation than second half.
  CHECK(pop.true_mean_latency[0] < pop.true_mean_latency[29]);
  // All expectations pairwise distinct.
  CHECK(pop.delta > 0.0);

  PopulationConfig large = small;
  large.K = 300;
  large.m = 15;
  large.total_data = 6000;
  large.num_clusters = 20;
  Rng rng2(2);
  const Population big = synthesize_population(large, rng2);
  CHECK(big.K() == 300);
}

TEST_CASE("dirichlet split preserves the total and positivity") {
  PopulationConfig cfg;
  cfg.iid = false;
  cfg.dirichlet_alpha = 3.0;
  Rng rng(3);
  const Population pop = synthesize_population(cfg, rng);
  long total = 0;
  bool all_equal = true;
  for (const auto& u : pop.users) {
    CHECK(u.data_size >= 1);
    total += u.data_size;
    all_equal = all_equal && (u.data_size == pop.users.front().data_size);
  }
  CHECK(total == pop.total_data);
  CHECK_FALSE(all_equal);
}

TEST_CASE("latency sampling respects the floor and the analytic mean") {
  UserProfile u;
  u.latency_mean = 1.0;
  u.latency_std = 0.3;
  SUBCASE("degenerate stddev") {
    Rng rng(4);
    u.latency_std = 0.0;
    CHECK(sample_latency(u, 0.5, rng) == 1.0);
  }
  SUBCASE("floor and moments") {
    Rng rng(5);
    const int n = 100'000;
    double sum = 0.0;
    for (int i = 0; i < n; ++i) {
      const double x = sample_latency(u, 0.5, rng);
      CHECK(x >= 0.5);
      sum += x;
    }
    const double want = truncated_normal_mean(1.0, 0.3, 0.5);
    CHECK(sum / n == doctest::Approx(want).epsilon(0.01));
  }
}

TEST_CASE("participation counts advance by m per round") {
  ExperimentConfig cfg = tiny_config();
  Rng pop_rng(6);
  const Population pop = synthesize_population(cfg.population, pop_rng);
  Simulation sim(cfg, pop, nullptr, Policy::kBrute, 1);
  for (int t = 1; t <= 30; ++t) {
    sim.step();
    int total = 0;
    for (UserId k = 1; k <= pop.K(); ++k) total += sim.state().T(k);
    CHECK(total == cfg.population.m * t);
  }
}

TEST_CASE("round latency is the maximum draw, plus the cluster penalty") {
  ExperimentConfig cfg = tiny_config();
  cfg.run.policies = {Policy::kFull};
  Rng pop_rng(7);
  const Population pop = synthesize_population(cfg.population, pop_rng);
  SUBCASE("full participation takes the global maximum") {
    Simulation sim(cfg, pop, nullptr, Policy::kFull, 3);
    for (int t = 0; t < 10; ++t) {
      const RoundOutcome out = sim.step();
      CHECK(out.selected.size() == pop.K());
      const double max_lat =
          *std::max_element(out.latencies.begin(), out.latencies.end());
      CHECK(out.round_latency == max_lat);
    }
  }
  SUBCASE("clustered variant adds the shared-cluster penalty") {
    ExperimentConfig clustered = cfg;
    clustered.reward.phi = "clustered";
    clustered.reward.rho = 0.1;
    clustered.reward.delta_tau = 0.05;
    Simulation sim(clustered, pop, nullptr, Policy::kFull, 3);
    const RoundOutcome out = sim.step();
    // All 6 users over 2 clusters: overflow = 6 - 2 = 4.
    const double max_lat =
        *std::max_element(out.latencies.begin(), out.latencies.end());
    CHECK(out.round_latency == doctest::Approx(max_lat + 0.05 * 4).epsilon(1e-12));
  }
}

TEST_CASE("with deterministic latencies the policy converges to the best set") {
  // The index policy keeps exploring at a logarithmic rate, so the tail is
  // dominated by the oracle set rather than identical to it.
  ExperimentConfig cfg = tiny_config();
  cfg.population.m = 3;
  cfg.population.fast_std = 0.0;
  cfg.population.slow_std = 0.0;
  cfg.population.slow_mean = 3.0;
  cfg.population.mean_step = 0.1;
  const int horizon = 2000;
  cfg.run.rounds = horizon;
  Rng pop_rng(8);
  const Population pop = synthesize_population(cfg.population, pop_rng);
  Simulation sim(cfg, pop, nullptr, Policy::kBrute, 1);
  int tail_best = 0;
  int tail_zero_regret = 0;
  const int tail_start = horizon - 500;
  const Vertex best = Vertex::of({1, 2, 3});  // the fast tier
  for (int t = 1; t <= horizon; ++t) {
    const RoundOutcome out = sim.step();
    if (t > tail_start) {
      if (out.selected == best) ++tail_best;
      if (out.regret_increment == 0.0) ++tail_zero_regret;
    }
  }
  CHECK(tail_best >= 350);         // >= 70% of the tail
  CHECK(tail_zero_regret >= 350);
}

TEST_CASE("genie policy has zero regret against itself") {
  ExperimentConfig cfg = tiny_config();
  cfg.run.policies = {Policy::kGenie};
  cfg.reward.alpha = 0.5;  // history-dependent shadow still matches
  cfg.reward.gamma = 0.5;
  Rng pop_rng(9);
  const Population pop = synthesize_population(cfg.population, pop_rng);
  Simulation sim(cfg, pop, nullptr, Policy::kGenie, 2);
  for (int t = 0; t < 40; ++t) {
    const RoundOutcome out = sim.step();
    CHECK(out.regret_increment == 0.0);
    CHECK(out.cum_regret == 0.0);
  }
}

TEST_CASE("genie selection drifts under a positive generalization weight") {
  ExperimentConfig cfg = tiny_config();
  cfg.reward.alpha = 1.0;
  cfg.run.policies = {Policy::kGenie};
  Rng pop_rng(10);
  const Population pop = synthesize_population(cfg.population, pop_rng);
  Simulation sim(cfg, pop, nullptr, Policy::kGenie, 3);
  std::set<Vertex> distinct;
  for (int t = 0; t < 200; ++t) distinct.insert(sim.step().selected);
  CHECK(distinct.size() > 1);
}

TEST_CASE("baseline selectors") {
  Rng pop_rng(11);
  PopulationConfig pc;
  const Population pop = synthesize_population(pc, pop_rng);
  SUBCASE("fastest in expectation is constant and truly fastest") {
    const Vertex f = baseline_fastest(pop, 5);
    CHECK(f == baseline_fastest(pop, 5));
    double worst_in = 0.0;
    for (UserId k : f.members) {
      worst_in = std::max(worst_in,
                          pop.true_mean_latency[static_cast<std::size_t>(k - 1)]);
    }
    for (UserId k = 1; k <= pop.K(); ++k) {
      if (!f.contains(k)) {
        CHECK(pop.true_mean_latency[static_cast<std::size_t>(k - 1)] >= worst_in);
      }
    }
  }
  SUBCASE("random selection frequencies concentrate at m/K") {
    Rng rng(12);
    const int rounds = 10'000;
    std::vector<int> count(30, 0);
    for (int t = 0; t < rounds; ++t) {
      for (UserId k : baseline_random(30, 5, rng).members) {
        count[static_cast<std::size_t>(k - 1)] += 1;
      }
    }
    const double p = 5.0 / 30.0;
    const double sigma = std::sqrt(rounds * p * (1.0 - p));
    for (int c : count) {
      CHECK(std::abs(c - rounds * p) < 3.0 * sigma);
    }
  }
  SUBCASE("full participation") {
    CHECK(baseline_full(4) == Vertex::of({1, 2, 3, 4}));
  }
}

TEST_CASE("common random numbers: policies share latency draws per round") {
  ExperimentConfig cfg = tiny_config();
  cfg.run.rounds = 15;
  cfg.run.policies = {Policy::kFull, Policy::kRandom};
  Rng pop_rng(13);
  const Population pop = synthesize_population(cfg.population, pop_rng);
  Simulation full(cfg, pop, nullptr, Policy::kFull, 5);
  Simulation random(cfg, pop, nullptr, Policy::kRandom, 5);
  for (int t = 0; t < 15; ++t) {
    const RoundOutcome a = full.step();
    const RoundOutcome b = random.step();
    // Each user the random policy drew must match the full policy's draw.
    for (std::size_t i = 0; i < b.selected.members.size(); ++i) {
      const UserId k = b.selected.members[i];
      CHECK(b.latencies[i] == a.latencies[static_cast<std::size_t>(k - 1)]);
    }
  }
}

TEST_CASE("max leakage stays below the budget and never decreases") {
  ExperimentConfig cfg = tiny_config();
  cfg.privacy.eps_bar = 10.0;
  cfg.run.policies = {Policy::kFull};
  Rng pop_rng(14);
  const Population pop = synthesize_population(cfg.population, pop_rng);
  Simulation sim(cfg, pop, nullptr, Policy::kFull, 1);
  double prev = 0.0;
  for (int t = 0; t < 2000; ++t) {
    const RoundOutcome out = sim.step();
    CHECK(out.max_leakage >= prev);
    CHECK(out.max_leakage < cfg.privacy.eps_bar);
    prev = out.max_leakage;
  }
}

TEST_CASE("clear-text baseline reports unbounded leakage growth") {
  ExperimentConfig cfg = tiny_config();
  cfg.run.policies = {Policy::kFullNoPrivacy};
  Rng pop_rng(15);
  const Population pop = synthesize_population(cfg.population, pop_rng);
  Simulation sim(cfg, pop, nullptr, Policy::kFullNoPrivacy, 1);
  sim.step();
  const RoundOutcome out = sim.step();
  CHECK(out.max_leakage == doctest::Approx(2.0 * cfg.privacy.eps_bar));
}

TEST_CASE("experiment output is byte-deterministic") {
  ExperimentConfig cfg = tiny_config();
  cfg.run.rounds = 25;
  cfg.run.policies = {Policy::kBrute, Policy::kRandom};
  cfg.run.seeds = {1, 2};
  const std::string a = rounds_csv(cfg, run_experiment(cfg));
  const std::string b = rounds_csv(cfg, run_experiment(cfg));
  CHECK(a == b);
  CHECK(a.substr(0, a.find('\n')) ==
        "run_id,policy,seed,t,selected_ids,round_latency,cum_latency,accuracy,"
        "max_leakage,realized_reward,genie_reward,cum_regret");

  // Training on changes nothing about determinism.
  ExperimentConfig trained = cfg;
  trained.toy.train = true;
  trained.toy.num_classes = 3;
  trained.run.rounds = 10;
  const std::string c = rounds_csv(trained, run_experiment(trained));
  CHECK(c == rounds_csv(trained, run_experiment(trained)));
}

TEST_CASE("zero-round experiment yields an empty series") {
  ExperimentConfig cfg = tiny_config();
  cfg.run.rounds = 0;
  const ExperimentResult result = run_experiment(cfg);
  for (const CellResult& cell : result.cells) CHECK(cell.rounds.empty());
}

TEST_CASE("toy local step basics") {
  ToyConfig toy;
  toy.num_classes = 3;
  toy.feature_dim = 2;
  PopulationConfig pc;
  pc.K = 4;
  pc.m = 2;
  pc.total_data = 200;
  pc.num_clusters = 2;
  Rng rng(16);
  const Population pop = synthesize_population(pc, rng);
  Rng task_rng(17);
  const SyntheticTask task = make_task(toy, pop, true, 0.25, task_rng);
  ToyModel model(toy.feature_dim, toy.num_classes);

  SUBCASE("zero learning rate gives a zero update") {
    ToyConfig frozen = toy;
    frozen.learning_rate = 0.0;
    Rng step_rng(18);
    const auto h = model.local_step(task.shards[0], frozen, step_rng);
    for (double x : h) CHECK(x == 0.0);
  }

  SUBCASE("aggregation weights are data-proportional and sum to one") {
    const Vertex s = Vertex::of({1, 3});
    long selected = 0;
    for (UserId k : s.members) {
      selected += pop.users[static_cast<std::size_t>(k - 1)].data_size;
    }
    double total_w = 0.0;
    for (UserId k : s.members) {
      total_w += static_cast<double>(
                     pop.users[static_cast<std::size_t>(k - 1)].data_size) /
                 static_cast<double>(selected);
    }
    CHECK(total_w == doctest::Approx(1.0).epsilon(1e-12));
  }

  SUBCASE("noise-free full participation drives the global loss down") {
    ToyConfig fullbatch = toy;
    fullbatch.learning_rate = 0.2;
    fullbatch.batch_size = 1'000'000;  // single full batch per epoch
    ToyModel global(toy.feature_dim, toy.num_classes);
    std::vector<Sample> all;
    for (const auto& shard : task.shards) {
      all.insert(all.end(), shard.begin(), shard.end());
    }
    double prev = global.loss(all);
    for (int round = 0; round < 30; ++round) {
      std::vector<std::vector<double>> updates;
      for (int k = 1; k <= pc.K; ++k) {
        Rng step_rng(100 + k);
        updates.push_back(global.local_step(
            task.shards[static_cast<std::size_t>(k - 1)], fullbatch, step_rng));
      }
      for (int k = 1; k <= pc.K; ++k) {
        const double w =
            static_cast<double>(pop.users[static_cast<std::size_t>(k - 1)].data_size) /
            static_cast<double>(pop.total_data);
        global.add_update(updates[static_cast<std::size_t>(k - 1)], w);
      }
      const double cur = global.loss(all);
      CHECK(cur <= prev + 1e-12);
      prev = cur;
    }
  }
}

TEST_CASE("non-iid shards carry a dominant label") {
  ToyConfig toy;
  toy.num_classes = 10;
  PopulationConfig pc;
  pc.K = 10;
  pc.m = 2;
  pc.iid = false;
  pc.total_data = 5000;
  Rng rng(19);
  const Population pop = synthesize_population(pc, rng);
  Rng task_rng(20);
  const SyntheticTask task = make_task(toy, pop, false, 0.25, task_rng);
  int dominant_hits = 0;
  long samples = 0;
  for (int k = 1; k <= pc.K; ++k) {
    const int dominant = (k - 1) % toy.num_classes;
    for (const Sample& s : task.shards[static_cast<std::size_t>(k - 1)]) {
      if (s.label == dominant) ++dominant_hits;
      ++samples;
    }
  }
  // About a quarter of each shard, far above the uniform 10%.
  const double frac = static_cast<double>(dominant_hits) / samples;
  CHECK(frac > 0.2);
  CHECK(frac < 0.4);
}

TEST_CASE("clustered variant runs end to end, including the oracle fallback") {
  // A guard below C(40,4) forces the oracle shadow onto the annealing path.
  ExperimentConfig cfg;
  cfg.population.K = 40;
  cfg.population.m = 4;
  cfg.population.total_data = 400;
  cfg.population.num_clusters = 6;
  cfg.reward.phi = "clustered";
  cfg.reward.alpha = 0.4;
  cfg.reward.gamma = 0.4;
  cfg.reward.rho = 0.1;
  cfg.reward.delta_tau = 0.05;
  cfg.bandit.brute_guard = 5'000;
  cfg.sa.iters = 2'000;
  cfg.toy.train = false;
  cfg.run.rounds = 30;
  cfg.run.policies = {Policy::kSa};
  Rng pop_rng(21);
  const Population pop = synthesize_population(cfg.population, pop_rng);
  Simulation sim(cfg, pop, nullptr, Policy::kSa, 1);
  for (int t = 0; t < 30; ++t) {
    const RoundOutcome out = sim.step();
    CHECK(std::isfinite(out.realized_reward));
    CHECK(std::isfinite(out.genie_reward));
    CHECK(out.round_latency > 0.0);
  }
}
