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

#ifndef FEDSEL_ENGINE_HPP_
#define FEDSEL_ENGINE_HPP_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "fedsel/bandit.hpp"
#include "fedsel/population.hpp"
#include "fedsel/privacy.hpp"
#include "fedsel/reward.hpp"
#include "fedsel/sa.hpp"
#include "fedsel/toy_model.hpp"

namespace fedsel {

enum class Policy {
  kBrute,        // exhaustive argmax of the ucb-based objective
  kPivotFill,    // exact heap solver (averaged variant only)
  kSa,           // tailored annealing approximation
  kVanillaSa,    // dense-neighborhood annealing baseline
  kGenie,        // oracle selection on the true mean ratios
  kRandom,       // uniform m-subset
  kFastest,      // fixed top-m by true expected latency
  kFull,         // all K users, privacy applied
  kFullNoPrivacy // all K users, updates sent in the clear
};

std::string policy_name(Policy p);
std::optional<Policy> parse_policy(const std::string& name);

struct PrivacyConfig {
  double eps_bar = 40.0;
  double eta = 0.05;
  double clip_bound = 1.0;

  void validate() const;
};

struct RewardBlock {
  double alpha = 1.0;
  double gamma = 1.0;
  double beta = 2.0;
  std::string phi = "averaged";  // averaged | clustered
  double rho = 0.1;
  double delta_tau = 0.05;  // per-shared-cluster round latency penalty

  void validate() const;
  bool clustered() const { return phi == "clustered"; }
};

struct BanditBlock {
  double zeta = 1.0;
  std::uint64_t brute_guard = 1'000'000;

  void validate() const;
};

struct SaBlock {
  double kappa = 1.0;
  int iters = 0;  // 0 -> 50 * K
  double omega = 1e-6;

  void validate() const;
};

struct RunBlock {
  int rounds = 400;
  std::vector<std::uint64_t> seeds = {1};
  std::vector<Policy> policies = {Policy::kBrute, Policy::kSa, Policy::kRandom,
                                  Policy::kFull};
  std::string run_id = "run";
  int window = 10;
  std::vector<int> checkpoints;  // empty -> {rounds}
  int threads = 0;               // 0 -> library default

  void validate() const;
};

struct ExperimentConfig {
  PopulationConfig population;
  PrivacyConfig privacy;
  RewardBlock reward;
  BanditBlock bandit;
  SaBlock sa;
  ToyConfig toy;
  RunBlock run;

  void validate() const;
};

/// One round's record; everything but the per-user latency draws lands in
/// the per-round CSV.
struct RoundOutcome {
  int t = 0;
  Vertex selected;
  std::vector<double> latencies;  // draws of the selected users, member order
  double round_latency = 0.0;
  double cum_latency = 0.0;
  double accuracy = 0.0;
  double max_leakage = 0.0;
  double realized_reward = 0.0;
  double genie_reward = 0.0;
  double regret_increment = 0.0;
  double cum_regret = 0.0;
};

/// One (policy, seed) cell: the per-round selection / privacy / training loop
/// with an oracle shadow evaluated on the same state trajectory and the same
/// latency draws. Latency draws are keyed by (seed, round) only, so every
/// policy under the same seed sees the same stream.
class Simulation {
 public:
  Simulation(const ExperimentConfig& cfg, const Population& pop,
             const SyntheticTask* task, Policy policy, std::uint64_t seed);

  RoundOutcome step();
  const SelectionState& state() const { return state_; }
  const RewardConfig& reward_config() const { return reward_cfg_; }
  Policy policy() const { return policy_; }

  /// Solver inputs as of the current state; exposed for the timing and
  /// verification harnesses.
  RoundValues current_values() const { return round_values(state_.ucb_values()); }

 private:
  Vertex select(int t, const RoundValues& values, Rng& policy_rng);
  Vertex genie_selection(int t, const RoundValues& values);
  RoundValues round_values(std::span<const double> base) const;

  const ExperimentConfig* cfg_;
  const Population* pop_;
  const SyntheticTask* task_;
  Policy policy_;
  std::uint64_t seed_;
  RewardConfig reward_cfg_;
  SelectionState state_;
  ToyModel model_;
  Vertex fastest_set_;
  double cum_latency_ = 0.0;
  double cum_regret_ = 0.0;
  double last_accuracy_ = 0.0;
};

struct CellResult {
  Policy policy;
  std::uint64_t seed = 0;
  std::vector<RoundOutcome> rounds;
};

struct ExperimentResult {
  Population population;
  std::vector<CellResult> cells;  // ordered by (policy order, seed order)
};

/// Runs every (policy, seed) cell; cells execute independently (optionally in
/// parallel) and are merged in configuration order, so output is
/// deterministic for a given config.
ExperimentResult run_experiment(const ExperimentConfig& cfg);

/// Serializes results into the per-round CSV schema.
std::string rounds_csv(const ExperimentConfig& cfg, const ExperimentResult& r);

/// Baseline selection rules exposed for tests.
Vertex baseline_random(int K, int m, Rng& rng);
Vertex baseline_fastest(const Population& pop, int m);
Vertex baseline_full(int K);

}  // namespace fedsel

#endif  // FEDSEL_ENGINE_HPP_
