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

#ifndef FEDSEL_REWARD_HPP_
#define FEDSEL_REWARD_HPP_

#include <span>
#include <vector>

#include "fedsel/common.hpp"
#include "fedsel/privacy.hpp"

namespace fedsel {

enum class PhiVariant { kAveraged, kClustered };

struct RewardConfig {
  double alpha = 0.0;  // generalization weight
  double gamma = 0.0;  // privacy weight
  double beta = 2.0;   // fuzziness exponent, > 1
  PhiVariant phi = PhiVariant::kAveraged;
  // Clustered variant only: per-user cluster ids in 1..num_clusters
  // (index = id - 1) and the per-shared-cluster penalty weight.
  double rho = 0.0;
  std::vector<int> clusters;
  int num_clusters = 0;

  void validate(int K) const;
};

/// Ranges of the bounded set-level terms; used when sizing the annealing
/// temperature coefficient. Averaged: generalization term spans 2, privacy
/// term spans 1. Clustered adds the worst-case penalty rho * (m - 1) (all m
/// users in one cluster) to the generalization span.
struct PhiRanges {
  double delta_phi_g;
  double delta_phi_p;
};
PhiRanges phi_ranges(const RewardConfig& cfg, int m);

/// Privacy reward of a user selected T_k times: the unspent budget fraction
/// 1 - (sum of the first T_k schedule terms) / eps_bar. Equals 1 when the
/// user never participated and decays toward 0, never reaching it.
double privacy_reward(int T_k, const PrivacySchedule& schedule);

/// Signed, beta-fuzzed gap between a user's data share scaled by m and its
/// participation ratio: |u|^beta * sign(u) with u = m*share - T_k/t.
double generalization_reward(int T_k, int t, int m, double data_share,
                             double beta);

double phi_avg(std::span<const double> values);

/// Cluster-penalised generalization term: mean of the members' g values
/// minus rho * sum_r max(0, |S ∩ C_r| - 1).
double phi_g_clustered(std::span<const double> g_by_user, const Vertex& set,
                       double rho, std::span<const int> clusters_by_user,
                       int num_clusters);

/// Evaluates min-of-base + alpha * Phi_g + gamma * Phi_p for member sets over
/// fixed per-user value arrays. Every solver (exhaustive, heap, annealing)
/// scores through one instance of this class, so equal sets produce
/// bit-identical scores regardless of which solver evaluated them.
class SetScorer {
 public:
  SetScorer(std::span<const double> base, std::span<const double> g,
            std::span<const double> p, const RewardConfig& cfg, int m);

  /// Members as 0-based indices into the value arrays.
  double score_indices(std::span<const int> members0) const;
  double score(const Vertex& v) const;

  int num_users() const { return static_cast<int>(base_.size()); }

 private:
  std::span<const double> base_;
  std::span<const double> g_;
  std::span<const double> p_;
  const RewardConfig* cfg_;
  int m_;
  mutable std::vector<int> cluster_count_;  // scratch, sized num_clusters
};

/// Realized round reward: min_{k in S} tau_min / tau_k plus the weighted
/// set-level terms. Latencies below tau_min violate the floor and are
/// rejected.
double realized_reward(const Vertex& set, std::span<const double> latencies,
                       double tau_min, std::span<const double> g_values,
                       std::span<const double> p_values,
                       const RewardConfig& cfg);

/// Oracle-policy score: the realized reward with latency ratios replaced by
/// their true expectations mu_k.
double genie_score(const Vertex& set, std::span<const double> mu,
                   std::span<const double> g_values,
                   std::span<const double> p_values, const RewardConfig& cfg);

/// Search objective of a candidate set under the current ucb values; the
/// quantity all selection solvers maximize.
double energy(const Vertex& set, std::span<const double> ucb_values,
              std::span<const double> g_values,
              std::span<const double> p_values, const RewardConfig& cfg);

}  // namespace fedsel

#endif  // FEDSEL_REWARD_HPP_
