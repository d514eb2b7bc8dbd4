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

#ifndef FEDSEL_POPULATION_HPP_
#define FEDSEL_POPULATION_HPP_

#include <cstdint>
#include <vector>

#include "fedsel/common.hpp"

namespace fedsel {

/// Static per-user description. latency_mean / latency_std parameterize the
/// (floor-truncated) normal latency distribution; data_size is |D_k|.
struct UserProfile {
  UserId id = 0;
  double latency_mean = 0.0;
  double latency_std = 0.0;
  long data_size = 0;
  int cluster = 1;
};

struct PopulationConfig {
  int K = 30;
  int m = 5;
  double tau_min = 0.5;
  // Two latency tiers, split evenly; per-user means step upward inside each
  // tier so all expectations are pairwise distinct.
  double fast_mean = 1.0;
  double slow_mean = 2.0;
  double fast_std = 0.1;
  double slow_std = 0.2;
  double mean_step = 0.02;
  bool iid = true;
  long total_data = 3000;
  double dirichlet_alpha = 3.0;
  double dominant_fraction = 0.25;
  int num_clusters = 6;

  void validate() const;
};

struct Population {
  std::vector<UserProfile> users;
  double tau_min = 0.0;
  long total_data = 0;

  // Simulator ground truth, computed at synthesis time:
  std::vector<double> true_mu;            // E[tau_min / tau_k]
  std::vector<double> true_mean_latency;  // E[tau_k] (after truncation)
  double delta = 0.0;                     // min pairwise gap of E[tau_k]

  int K() const { return static_cast<int>(users.size()); }
  double data_share(UserId k) const {
    return static_cast<double>(users[static_cast<std::size_t>(k - 1)].data_size) /
           static_cast<double>(total_data);
  }
};

/// Builds K users in two latency tiers with the configured data split
/// (equal shares or Dirichlet-proportional sizes) and uniformly random
/// cluster assignments, then computes the ground-truth latency moments.
Population synthesize_population(const PopulationConfig& cfg, Rng& rng);

/// One latency draw: normal(latency_mean, latency_std) truncated below at
/// tau_min by rejection (an atom at the floor would bias the means).
double sample_latency(const UserProfile& profile, double tau_min, Rng& rng);

}  // namespace fedsel

#endif  // FEDSEL_POPULATION_HPP_
