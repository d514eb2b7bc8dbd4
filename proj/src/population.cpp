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

#include "fedsel/population.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "fedsel/numerics.hpp"

namespace fedsel {

void PopulationConfig::validate() const {
  require(K >= 1, "K must be positive");
  require(m >= 1 && m <= K, "need 1 <= m <= K");
  require(tau_min > 0.0, "tau_min must be positive");
  require(fast_mean >= tau_min && slow_mean >= tau_min,
          "latency means must not fall below the floor");
  require(fast_std >= 0.0 && slow_std >= 0.0, "stddevs must be nonnegative");
  require(mean_step >= 0.0, "mean_step must be nonnegative");
  require(total_data >= K, "need at least one sample per user");
  require(dirichlet_alpha > 0.0, "dirichlet_alpha must be positive");
  require(dominant_fraction >= 0.0 && dominant_fraction <= 1.0,
          "dominant_fraction in [0,1]");
  require(num_clusters >= 1 && num_clusters <= K, "need 1 <= clusters <= K");
}

namespace {

// Marsaglia-Tsang gamma sampler (shape >= 1 handled directly; smaller shapes
// via the boost identity).
double sample_gamma(double shape, Rng& rng) {
  if (shape < 1.0) {
    const double u = rng.uniform01();
    return sample_gamma(shape + 1.0, rng) * std::pow(u, 1.0 / shape);
  }
  const double d = shape - 1.0 / 3.0;
  const double c = 1.0 / std::sqrt(9.0 * d);
  while (true) {
    double x;
    double v;
    do {
      x = rng.normal();
      v = 1.0 + c * x;
    } while (v <= 0.0);
    v = v * v * v;
    const double u = rng.uniform01();
    if (u < 1.0 - 0.0331 * x * x * x * x) return d * v;
    if (std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) return d * v;
  }
}

std::vector<long> split_data(const PopulationConfig& cfg, Rng& rng) {
  const auto K = static_cast<std::size_t>(cfg.K);
  std::vector<long> sizes(K, 0);
  if (cfg.iid) {
    const long base = cfg.total_data / cfg.K;
    long rem = cfg.total_data % cfg.K;
    for (std::size_t i = 0; i < K; ++i) {
      sizes[i] = base + (static_cast<long>(i) < rem ? 1 : 0);
    }
    return sizes;
  }
  std::vector<double> w(K);
  double sum = 0.0;
  for (double& x : w) {
    x = sample_gamma(cfg.dirichlet_alpha, rng);
    sum += x;
  }
  // Shares are capped at 1/m so the scaled share m |D_k|/|D| stays in (0, 1]
  // and the documented reward ranges hold.
  const long cap = cfg.total_data / cfg.m;
  long assigned = 0;
  for (std::size_t i = 0; i < K; ++i) {
    sizes[i] = std::clamp<long>(std::lround(w[i] / sum * cfg.total_data), 1, cap);
    assigned += sizes[i];
  }
  // Fix the rounding drift, staying inside the [1, cap] band while possible
  // (K = m with a non-divisible total has to spill over it by one).
  std::size_t j = 0;
  std::size_t stalled = 0;
  while (assigned != cfg.total_data) {
    const std::size_t i = j % K;
    bool moved = false;
    if (assigned > cfg.total_data && sizes[i] > 1) {
      --sizes[i];
      --assigned;
      moved = true;
    } else if (assigned < cfg.total_data && (sizes[i] < cap || stalled >= K)) {
      ++sizes[i];
      ++assigned;
      moved = true;
    }
    stalled = moved ? 0 : stalled + 1;
    ++j;
  }
  return sizes;
}

}  // namespace

Population synthesize_population(const PopulationConfig& cfg, Rng& rng) {
  cfg.validate();
  Population pop;
  pop.tau_min = cfg.tau_min;
  pop.total_data = cfg.total_data;

  const std::vector<long> sizes = split_data(cfg, rng);
  const int half = cfg.K / 2;
  pop.users.reserve(static_cast<std::size_t>(cfg.K));
  for (int i = 0; i < cfg.K; ++i) {
    UserProfile u;
    u.id = i + 1;
    const bool fast = i < half || cfg.K == 1;
    const int tier_pos = fast ? i : i - half;
    u.latency_mean = (fast ? cfg.fast_mean : cfg.slow_mean) + cfg.mean_step * tier_pos;
    u.latency_std = fast ? cfg.fast_std : cfg.slow_std;
    u.data_size = sizes[static_cast<std::size_t>(i)];
    u.cluster = static_cast<int>(rng.uniform_int(
                    static_cast<std::uint64_t>(cfg.num_clusters))) + 1;
    pop.users.push_back(u);
  }

  pop.true_mu.resize(static_cast<std::size_t>(cfg.K));
  pop.true_mean_latency.resize(static_cast<std::size_t>(cfg.K));
  for (int i = 0; i < cfg.K; ++i) {
    const UserProfile& u = pop.users[static_cast<std::size_t>(i)];
    pop.true_mean_latency[static_cast<std::size_t>(i)] =
        truncated_normal_mean(u.latency_mean, u.latency_std, cfg.tau_min);
    pop.true_mu[static_cast<std::size_t>(i)] = truncated_normal_expectation(
        [&](double x) { return cfg.tau_min / x; }, u.latency_mean,
        u.latency_std, cfg.tau_min);
  }

  pop.delta = std::numeric_limits<double>::infinity();
  for (int i = 0; i < cfg.K; ++i) {
    for (int j = i + 1; j < cfg.K; ++j) {
      pop.delta = std::min(pop.delta,
                           std::abs(pop.true_mean_latency[static_cast<std::size_t>(i)] -
                                    pop.true_mean_latency[static_cast<std::size_t>(j)]));
    }
  }
  if (cfg.K == 1) pop.delta = 0.0;
  return pop;
}

double sample_latency(const UserProfile& profile, double tau_min, Rng& rng) {
  if (profile.latency_std == 0.0) return profile.latency_mean;
  double x;
  do {
    x = rng.normal(profile.latency_mean, profile.latency_std);
  } while (x < tau_min);
  return x;
}

}  // namespace fedsel
