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

#include "fedsel/reward.hpp"

#include <cmath>
#include <limits>

namespace fedsel {

void RewardConfig::validate(int K) const {
  require(alpha >= 0.0, "alpha must be nonnegative");
  require(gamma >= 0.0, "gamma must be nonnegative");
  require(beta > 1.0, "beta must exceed 1");
  if (phi == PhiVariant::kClustered) {
    require(rho >= 0.0, "rho must be nonnegative");
    require(num_clusters >= 1, "clustered variant needs clusters");
    require(static_cast<int>(clusters.size()) == K,
            "clustered variant needs a cluster id per user");
    for (int c : clusters) {
      require(c >= 1 && c <= num_clusters, "cluster id out of range");
    }
  }
}

PhiRanges phi_ranges(const RewardConfig& cfg, int m) {
  if (cfg.phi == PhiVariant::kClustered) {
    return {2.0 + cfg.rho * (m - 1), 1.0};
  }
  return {2.0, 1.0};
}

double privacy_reward(int T_k, const PrivacySchedule& schedule) {
  require(T_k >= 0, "participation count must be nonnegative");
  // 1 - partial_sum(T)/eps_bar collapses algebraically to the unspent
  // fraction e^(-eta T); this form stays strictly positive long after the
  // subtraction would round to zero.
  return std::exp(-schedule.eta() * T_k);
}

double generalization_reward(int T_k, int t, int m, double data_share,
                             double beta) {
  require(t >= 1, "round index starts at 1");
  require(data_share > 0.0 && data_share <= 1.0, "data share in (0,1]");
  const double u = m * data_share - static_cast<double>(T_k) / t;
  if (u == 0.0) return 0.0;
  return std::pow(std::abs(u), beta) * (u > 0.0 ? 1.0 : -1.0);
}

double phi_avg(std::span<const double> values) {
  require(!values.empty(), "averaging an empty set");
  double sum = 0.0;
  for (double v : values) sum += v;
  return sum / static_cast<double>(values.size());
}

double phi_g_clustered(std::span<const double> g_by_user, const Vertex& set,
                       double rho, std::span<const int> clusters_by_user,
                       int num_clusters) {
  require(num_clusters >= 1, "need at least one cluster");
  std::vector<int> count(static_cast<std::size_t>(num_clusters), 0);
  double sum = 0.0;
  for (UserId k : set.members) {
    const auto i = static_cast<std::size_t>(k - 1);
    require(i < g_by_user.size(), "missing g value");
    require(i < clusters_by_user.size(), "missing cluster id");
    sum += g_by_user[i];
    count[static_cast<std::size_t>(clusters_by_user[i] - 1)] += 1;
  }
  int overflow = 0;
  for (int c : count) overflow += std::max(0, c - 1);
  return sum / set.size() - rho * overflow;
}

SetScorer::SetScorer(std::span<const double> base, std::span<const double> g,
                     std::span<const double> p, const RewardConfig& cfg, int m)
    : base_(base), g_(g), p_(p), cfg_(&cfg), m_(m) {
  require(m >= 1, "set size must be positive");
  require(base.size() == g.size() && g.size() == p.size(),
          "value arrays must have one entry per user");
  if (cfg.phi == PhiVariant::kClustered) {
    cluster_count_.assign(static_cast<std::size_t>(cfg.num_clusters), 0);
  }
}

double SetScorer::score_indices(std::span<const int> members0) const {
  double min_base = std::numeric_limits<double>::infinity();
  double sum_g = 0.0;
  double sum_p = 0.0;
  for (int i : members0) {
    const auto u = static_cast<std::size_t>(i);
    min_base = std::min(min_base, base_[u]);
    sum_g += g_[u];
    sum_p += p_[u];
  }
  double phi_g = sum_g / m_;
  if (cfg_->phi == PhiVariant::kClustered) {
    int overflow = 0;
    for (int i : members0) {
      const auto c = static_cast<std::size_t>(cfg_->clusters[static_cast<std::size_t>(i)] - 1);
      if (++cluster_count_[c] > 1) ++overflow;
    }
    for (int i : members0) {
      cluster_count_[static_cast<std::size_t>(cfg_->clusters[static_cast<std::size_t>(i)] - 1)] = 0;
    }
    phi_g -= cfg_->rho * overflow;
  }
  const double phi_p = sum_p / m_;
  return min_base + cfg_->alpha * phi_g + cfg_->gamma * phi_p;
}

double SetScorer::score(const Vertex& v) const {
  int buf[64];
  std::vector<int> heap_buf;
  int* idx = buf;
  if (v.size() > 64) {
    heap_buf.resize(static_cast<std::size_t>(v.size()));
    idx = heap_buf.data();
  }
  for (int i = 0; i < v.size(); ++i) {
    idx[i] = v.members[static_cast<std::size_t>(i)] - 1;
  }
  return score_indices(std::span<const int>(idx, static_cast<std::size_t>(v.size())));
}

double realized_reward(const Vertex& set, std::span<const double> latencies,
                       double tau_min, std::span<const double> g_values,
                       std::span<const double> p_values,
                       const RewardConfig& cfg) {
  require(tau_min > 0.0, "tau_min must be positive");
  double min_ratio = std::numeric_limits<double>::infinity();
  double sum_g = 0.0;
  double sum_p = 0.0;
  for (UserId k : set.members) {
    const auto i = static_cast<std::size_t>(k - 1);
    require(i < latencies.size(), "missing latency draw");
    require(latencies[i] >= tau_min, "latency below the floor");
    min_ratio = std::min(min_ratio, tau_min / latencies[i]);
    sum_g += g_values[i];
    sum_p += p_values[i];
  }
  const int m = set.size();
  double phi_g;
  if (cfg.phi == PhiVariant::kClustered) {
    phi_g = phi_g_clustered(g_values, set, cfg.rho, cfg.clusters, cfg.num_clusters);
  } else {
    phi_g = sum_g / m;
  }
  const double phi_p = sum_p / m;
  return min_ratio + cfg.alpha * phi_g + cfg.gamma * phi_p;
}

double genie_score(const Vertex& set, std::span<const double> mu,
                   std::span<const double> g_values,
                   std::span<const double> p_values, const RewardConfig& cfg) {
  SetScorer scorer(mu, g_values, p_values, cfg, set.size());
  return scorer.score(set);
}

double energy(const Vertex& set, std::span<const double> ucb_values,
              std::span<const double> g_values,
              std::span<const double> p_values, const RewardConfig& cfg) {
  SetScorer scorer(ucb_values, g_values, p_values, cfg, set.size());
  return scorer.score(set);
}

}  // namespace fedsel
