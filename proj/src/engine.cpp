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

#include "fedsel/engine.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>

#ifdef FEDSEL_HAVE_OPENMP
#include <omp.h>
#endif

namespace fedsel {

namespace {

// Stream tags; latency CRN is keyed by (seed, round) only so every policy
// under one seed sees identical draws.
constexpr std::uint64_t kLatencyTag = 1;
constexpr std::uint64_t kPolicyTag = 2;
constexpr std::uint64_t kTrainTag = 3;
constexpr std::uint64_t kNoiseTag = 4;
constexpr std::uint64_t kPopulationTag = 5;
constexpr std::uint64_t kTaskTag = 6;
constexpr std::uint64_t kGenieTag = 7;

}  // namespace

std::string policy_name(Policy p) {
  switch (p) {
    case Policy::kBrute: return "brute";
    case Policy::kPivotFill: return "pivot_fill";
    case Policy::kSa: return "sa";
    case Policy::kVanillaSa: return "vanilla_sa";
    case Policy::kGenie: return "genie";
    case Policy::kRandom: return "random";
    case Policy::kFastest: return "fastest";
    case Policy::kFull: return "full";
    case Policy::kFullNoPrivacy: return "full_no_privacy";
  }
  return "unknown";
}

std::optional<Policy> parse_policy(const std::string& name) {
  for (Policy p : {Policy::kBrute, Policy::kPivotFill, Policy::kSa,
                   Policy::kVanillaSa, Policy::kGenie, Policy::kRandom,
                   Policy::kFastest, Policy::kFull, Policy::kFullNoPrivacy}) {
    if (policy_name(p) == name) return p;
  }
  return std::nullopt;
}

void PrivacyConfig::validate() const {
  require(eps_bar > 0.0, "eps_bar must be positive");
  require(eta > 0.0, "eta must be positive");
  require(clip_bound > 0.0, "clip_bound must be positive");
}

void RewardBlock::validate() const {
  require(alpha >= 0.0, "alpha must be nonnegative");
  require(gamma >= 0.0, "gamma must be nonnegative");
  require(beta > 1.0, "beta must exceed 1");
  require(phi == "averaged" || phi == "clustered", "phi must be averaged|clustered");
  require(rho >= 0.0, "rho must be nonnegative");
  require(delta_tau >= 0.0, "delta_tau must be nonnegative");
}

void BanditBlock::validate() const {
  require(zeta > 0.0, "zeta must be positive");
  require(brute_guard >= 1, "brute_guard must be positive");
}

void SaBlock::validate() const {
  require(kappa >= 1.0, "kappa must be at least 1");
  require(iters >= 0, "sa iterations must be nonnegative");
  require(omega > 0.0, "omega must be positive");
}

void RunBlock::validate() const {
  require(rounds >= 0, "rounds must be nonnegative");
  require(!seeds.empty(), "need at least one seed");
  require(!policies.empty(), "need at least one policy");
  require(window >= 1, "window must be positive");
  for (int c : checkpoints) require(c >= 1, "checkpoints must be positive");
  require(threads >= 0, "threads must be nonnegative");
}

void ExperimentConfig::validate() const {
  population.validate();
  privacy.validate();
  reward.validate();
  bandit.validate();
  sa.validate();
  toy.validate();
  run.validate();
  const std::uint64_t count =
      binomial_capped(population.K, population.m, bandit.brute_guard + 1);
  for (Policy p : run.policies) {
    if (p == Policy::kBrute) {
      require(count <= bandit.brute_guard,
              "brute policy exceeds the enumeration guard at this K, m");
    }
    if (p == Policy::kPivotFill) {
      require(!reward.clustered(),
              "pivot_fill requires the averaged reward variant");
    }
  }
}

Vertex baseline_random(int K, int m, Rng& rng) {
  std::vector<UserId> pool(static_cast<std::size_t>(K));
  for (int i = 0; i < K; ++i) pool[static_cast<std::size_t>(i)] = i + 1;
  std::vector<UserId> pick;
  pick.reserve(static_cast<std::size_t>(m));
  for (int i = 0; i < m; ++i) {
    const auto j = static_cast<std::size_t>(i) +
                   static_cast<std::size_t>(rng.uniform_int(
                       static_cast<std::uint64_t>(K - i)));
    std::swap(pool[static_cast<std::size_t>(i)], pool[j]);
    pick.push_back(pool[static_cast<std::size_t>(i)]);
  }
  return Vertex::of(std::move(pick));
}

Vertex baseline_fastest(const Population& pop, int m) {
  std::vector<int> order(static_cast<std::size_t>(pop.K()));
  for (int i = 0; i < pop.K(); ++i) order[static_cast<std::size_t>(i)] = i;
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    const double la = pop.true_mean_latency[static_cast<std::size_t>(a)];
    const double lb = pop.true_mean_latency[static_cast<std::size_t>(b)];
    if (la != lb) return la < lb;
    return a < b;
  });
  std::vector<UserId> ids;
  for (int i = 0; i < m; ++i) ids.push_back(order[static_cast<std::size_t>(i)] + 1);
  return Vertex::of(std::move(ids));
}

Vertex baseline_full(int K) {
  std::vector<UserId> ids(static_cast<std::size_t>(K));
  for (int i = 0; i < K; ++i) ids[static_cast<std::size_t>(i)] = i + 1;
  return Vertex::of(std::move(ids));
}

namespace {

RewardConfig build_reward_config(const ExperimentConfig& cfg,
                                 const Population& pop) {
  RewardConfig rc;
  rc.alpha = cfg.reward.alpha;
  rc.gamma = cfg.reward.gamma;
  rc.beta = cfg.reward.beta;
  if (cfg.reward.clustered()) {
    rc.phi = PhiVariant::kClustered;
    rc.rho = cfg.reward.rho;
    rc.num_clusters = cfg.population.num_clusters;
    rc.clusters.reserve(pop.users.size());
    for (const UserProfile& u : pop.users) rc.clusters.push_back(u.cluster);
  }
  return rc;
}

int cluster_overflow(const Vertex& v, const RewardConfig& rc) {
  if (rc.phi != PhiVariant::kClustered) return 0;
  std::vector<int> count(static_cast<std::size_t>(rc.num_clusters), 0);
  for (UserId k : v.members) {
    count[static_cast<std::size_t>(rc.clusters[static_cast<std::size_t>(k - 1)] - 1)] += 1;
  }
  int overflow = 0;
  for (int c : count) overflow += std::max(0, c - 1);
  return overflow;
}

bool is_bandit_family(Policy p) {
  switch (p) {
    case Policy::kBrute:
    case Policy::kPivotFill:
    case Policy::kSa:
    case Policy::kVanillaSa:
    case Policy::kGenie:
      return true;
    default:
      return false;
  }
}

}  // namespace

Simulation::Simulation(const ExperimentConfig& cfg, const Population& pop,
                       const SyntheticTask* task, Policy policy,
                       std::uint64_t seed)
    : cfg_(&cfg),
      pop_(&pop),
      task_(task),
      policy_(policy),
      seed_(seed),
      reward_cfg_(build_reward_config(cfg, pop)),
      state_(pop.K(), cfg.population.m,
             PrivacySchedule(cfg.privacy.eps_bar, cfg.privacy.eta),
             cfg.bandit.zeta),
      model_(cfg.toy.feature_dim, cfg.toy.num_classes),
      fastest_set_(baseline_fastest(pop, cfg.population.m)) {
  reward_cfg_.validate(pop.K());
  if (cfg.toy.train) require(task != nullptr, "training enabled without a task");
}

RoundValues Simulation::round_values(std::span<const double> base) const {
  RoundValues v;
  v.base.assign(base.begin(), base.end());
  const int K = pop_->K();
  const int m = cfg_->population.m;
  const int t_prev = std::max(1, state_.round());
  v.g.resize(static_cast<std::size_t>(K));
  v.p.resize(static_cast<std::size_t>(K));
  for (int i = 0; i < K; ++i) {
    const UserId k = i + 1;
    // Before any round completes T_k = 0, so t_prev = 1 yields the empty
    // history value of both rewards.
    v.g[static_cast<std::size_t>(i)] = generalization_reward(
        state_.T(k), t_prev, m, pop_->data_share(k), cfg_->reward.beta);
    v.p[static_cast<std::size_t>(i)] =
        privacy_reward(state_.T(k), state_.ledger().schedule());
  }
  return v;
}

Vertex Simulation::genie_selection(int t, const RoundValues& values) {
  const int K = pop_->K();
  const int m = cfg_->population.m;
  RoundValues genie_values = values;
  genie_values.base = pop_->true_mu;
  if (!cfg_->reward.clustered()) {
    return select_pivot_fill(genie_values, reward_cfg_, m);
  }
  const std::uint64_t count = binomial_capped(K, m, cfg_->bandit.brute_guard + 1);
  if (count <= cfg_->bandit.brute_guard) {
    return select_brute(genie_values, reward_cfg_, m,
                        {true, cfg_->bandit.brute_guard});
  }
  // Beyond the enumeration guard the shadow itself falls back to annealing.
  SaParams params;
  params.kappa = cfg_->sa.kappa;
  params.max_iters = cfg_->sa.iters;
  params.omega = cfg_->sa.omega;
  params.seed = mix_seed(seed_, kGenieTag, static_cast<std::uint64_t>(t));
  Rng init_rng(mix_seed(seed_, kGenieTag, static_cast<std::uint64_t>(t), 3));
  return sa_search(genie_values, reward_cfg_, params,
                   baseline_random(K, m, init_rng));
}

Vertex Simulation::select(int t, const RoundValues& values, Rng& policy_rng) {
  const int K = pop_->K();
  const int m = cfg_->population.m;
  if (is_bandit_family(policy_) && t <= state_.warmup_rounds()) {
    return warmup_selection(t, K, m);
  }
  switch (policy_) {
    case Policy::kBrute:
      return select_brute(values, reward_cfg_, m, {true, cfg_->bandit.brute_guard});
    case Policy::kPivotFill:
      return select_pivot_fill(values, reward_cfg_, m);
    case Policy::kSa:
    case Policy::kVanillaSa: {
      SaParams params;
      params.kappa = cfg_->sa.kappa;
      params.max_iters = cfg_->sa.iters;
      params.omega = cfg_->sa.omega;
      params.seed = mix_seed(seed_, kPolicyTag, static_cast<std::uint64_t>(policy_),
                             static_cast<std::uint64_t>(t), 17);
      const Vertex initial = baseline_random(K, m, policy_rng);
      return policy_ == Policy::kSa
                 ? sa_search(values, reward_cfg_, params, initial)
                 : vanilla_sa_search(values, reward_cfg_, params, initial);
    }
    case Policy::kGenie:
      return genie_selection(t, values);
    case Policy::kRandom:
      return baseline_random(K, m, policy_rng);
    case Policy::kFastest:
      return fastest_set_;
    case Policy::kFull:
    case Policy::kFullNoPrivacy:
      return baseline_full(K);
  }
  throw std::logic_error("unreachable policy");
}

RoundOutcome Simulation::step() {
  const int t = state_.round() + 1;
  const int K = pop_->K();
  const double tau_min = pop_->tau_min;

  // Values seen by the selector and the oracle shadow: state at t - 1.
  RoundValues values = round_values(state_.ucb_values());

  Rng policy_rng(mix_seed(seed_, kPolicyTag, static_cast<std::uint64_t>(policy_),
                          static_cast<std::uint64_t>(t)));
  const Vertex selected = select(t, values, policy_rng);

  // Oracle shadow on the same trajectory. During a bandit policy's warm-up
  // both select the same block so regret starts from a common state.
  const Vertex genie_set =
      (is_bandit_family(policy_) && t <= state_.warmup_rounds())
          ? selected
          : genie_selection(t, values);

  // Common-random-number latency draws, in user id order.
  Rng lat_rng(mix_seed(seed_, kLatencyTag, static_cast<std::uint64_t>(t)));
  std::vector<double> lat(static_cast<std::size_t>(K));
  for (int i = 0; i < K; ++i) {
    lat[static_cast<std::size_t>(i)] =
        sample_latency(pop_->users[static_cast<std::size_t>(i)], tau_min, lat_rng);
  }

  RoundOutcome out;
  out.t = t;
  out.selected = selected;
  out.latencies.reserve(selected.members.size());
  for (UserId k : selected.members) {
    out.latencies.push_back(lat[static_cast<std::size_t>(k - 1)]);
  }
  out.realized_reward =
      realized_reward(selected, lat, tau_min, values.g, values.p, reward_cfg_);
  out.genie_reward =
      realized_reward(genie_set, lat, tau_min, values.g, values.p, reward_cfg_);
  out.regret_increment = out.genie_reward - out.realized_reward;
  cum_regret_ += out.regret_increment;
  out.cum_regret = cum_regret_;

  double max_lat = 0.0;
  for (UserId k : selected.members) {
    max_lat = std::max(max_lat, lat[static_cast<std::size_t>(k - 1)]);
  }
  out.round_latency =
      max_lat + cfg_->reward.delta_tau * cluster_overflow(selected, reward_cfg_);
  cum_latency_ += out.round_latency;
  out.cum_latency = cum_latency_;

  // Leakage is charged at selection time; the clear-text baseline reports a
  // full budget per round instead (its uploads are unprotected).
  const bool charges = policy_ != Policy::kFullNoPrivacy;
  std::vector<double> granted(selected.members.size(), 0.0);
  for (UserId k : selected.members) state_.record_selection(k);
  if (charges) {
    for (std::size_t i = 0; i < selected.members.size(); ++i) {
      granted[i] = state_.ledger().charge(selected.members[i]);
    }
    out.max_leakage = state_.ledger().max_spent();
  } else {
    out.max_leakage = static_cast<double>(t) * cfg_->privacy.eps_bar;
  }

  if (cfg_->toy.train) {
    std::vector<std::vector<double>> updates;
    updates.reserve(selected.members.size());
    long selected_data = 0;
    for (UserId k : selected.members) {
      selected_data += pop_->users[static_cast<std::size_t>(k - 1)].data_size;
    }
    // Training shuffles and noise draws are keyed by (seed, round, user)
    // only, so policies making the same selection see the same randomness;
    // accuracy curves then differ through the selections, not the noise.
    for (std::size_t i = 0; i < selected.members.size(); ++i) {
      const UserId k = selected.members[i];
      Rng train_rng(mix_seed(seed_, kTrainTag, static_cast<std::uint64_t>(t),
                             static_cast<std::uint64_t>(k)));
      std::vector<double> h = model_.local_step(
          task_->shards[static_cast<std::size_t>(k - 1)], cfg_->toy, train_rng);
      if (charges) {
        h = clip_l1(std::move(h), cfg_->privacy.clip_bound);
        Rng noise_rng(mix_seed(seed_, kNoiseTag, static_cast<std::uint64_t>(t),
                               static_cast<std::uint64_t>(k)));
        h = privatize_update(std::move(h), cfg_->privacy.clip_bound, granted[i],
                             noise_rng);
      }
      updates.push_back(std::move(h));
    }
    for (std::size_t i = 0; i < selected.members.size(); ++i) {
      const UserId k = selected.members[i];
      const double w =
          static_cast<double>(pop_->users[static_cast<std::size_t>(k - 1)].data_size) /
          static_cast<double>(selected_data);
      model_.add_update(updates[i], w);
    }
    last_accuracy_ = model_.accuracy(task_->test);
  }
  out.accuracy = last_accuracy_;

  for (UserId k : selected.members) {
    state_.update_mu(k, tau_min / lat[static_cast<std::size_t>(k - 1)]);
  }
  state_.end_round();
  return out;
}

ExperimentResult run_experiment(const ExperimentConfig& cfg) {
  cfg.validate();
  ExperimentResult result;

  struct SeedContext {
    Population pop;
    SyntheticTask task;
  };
  std::vector<SeedContext> contexts(cfg.run.seeds.size());
  for (std::size_t si = 0; si < cfg.run.seeds.size(); ++si) {
    const std::uint64_t seed = cfg.run.seeds[si];
    Rng pop_rng(mix_seed(seed, kPopulationTag));
    contexts[si].pop = synthesize_population(cfg.population, pop_rng);
    if (cfg.toy.train) {
      Rng task_rng(mix_seed(seed, kTaskTag));
      contexts[si].task = make_task(cfg.toy, contexts[si].pop,
                                    cfg.population.iid,
                                    cfg.population.dominant_fraction, task_rng);
    }
  }
  result.population = contexts.front().pop;

  const std::size_t n_cells = cfg.run.policies.size() * cfg.run.seeds.size();
  std::vector<CellResult> cells(n_cells);

  const auto run_cell = [&](std::size_t ci) {
    const std::size_t pi = ci / cfg.run.seeds.size();
    const std::size_t si = ci % cfg.run.seeds.size();
    const Policy policy = cfg.run.policies[pi];
    const std::uint64_t seed = cfg.run.seeds[si];
    CellResult& cell = cells[ci];
    cell.policy = policy;
    cell.seed = seed;
    Simulation sim(cfg, contexts[si].pop,
                   cfg.toy.train ? &contexts[si].task : nullptr, policy, seed);
    cell.rounds.reserve(static_cast<std::size_t>(cfg.run.rounds));
    for (int t = 0; t < cfg.run.rounds; ++t) cell.rounds.push_back(sim.step());
  };

#ifdef FEDSEL_HAVE_OPENMP
  const int threads = cfg.run.threads > 0 ? cfg.run.threads : omp_get_max_threads();
#pragma omp parallel for schedule(dynamic) num_threads(threads)
  for (std::int64_t ci = 0; ci < static_cast<std::int64_t>(n_cells); ++ci) {
    run_cell(static_cast<std::size_t>(ci));
  }
#else
  for (std::size_t ci = 0; ci < n_cells; ++ci) run_cell(ci);
#endif

  result.cells = std::move(cells);
  return result;
}

namespace {

void append_double(std::string& out, double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  out.append(buf, res.ptr);
}

}  // namespace

std::string rounds_csv(const ExperimentConfig& cfg, const ExperimentResult& r) {
  std::string out =
      "run_id,policy,seed,t,selected_ids,round_latency,cum_latency,accuracy,"
      "max_leakage,realized_reward,genie_reward,cum_regret\n";
  for (const CellResult& cell : r.cells) {
    const std::string prefix =
        cfg.run.run_id + "," + policy_name(cell.policy) + "," +
        std::to_string(cell.seed) + ",";
    for (const RoundOutcome& row : cell.rounds) {
      out += prefix;
      out += std::to_string(row.t);
      out.push_back(',');
      out += to_string(row.selected);
      out.push_back(',');
      append_double(out, row.round_latency);
      out.push_back(',');
      append_double(out, row.cum_latency);
      out.push_back(',');
      append_double(out, row.accuracy);
      out.push_back(',');
      append_double(out, row.max_leakage);
      out.push_back(',');
      append_double(out, row.realized_reward);
      out.push_back(',');
      append_double(out, row.genie_reward);
      out.push_back(',');
      append_double(out, row.cum_regret);
      out.push_back('\n');
    }
  }
  return out;
}

}  // namespace fedsel
