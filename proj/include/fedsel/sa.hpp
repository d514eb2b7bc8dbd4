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

#ifndef FEDSEL_SA_HPP_
#define FEDSEL_SA_HPP_

#include <cstdint>
#include <span>
#include <vector>

#include "fedsel/bandit.hpp"
#include "fedsel/reward.hpp"

namespace fedsel {

struct SaParams {
  double kappa = 1.0;    // cooling accelerator; tau_j = C / (kappa ln(1+j))
  int max_iters = 0;     // 0 means the 50 * K default
  std::uint64_t seed = 0;
  double omega = 1e-6;   // additive slack in the temperature coefficient

  int iterations(int K) const { return max_iters > 0 ? max_iters : 50 * K; }
};

/// Temperature coefficient sized from the current ucb spread plus the ranges
/// of the bounded set-level terms: strictly exceeds the maximal energy gap
/// between any two candidate sets.
double compute_c(std::span<const double> ucb_values, const RewardConfig& cfg,
                 int m, double omega);

/// Loose upper bound 2 alpha + gamma + 1 used by the vanilla search.
double compute_c_vanilla(const RewardConfig& cfg);

/// All sets obtained by replacing v's minimal-ucb member with each outside
/// user; exactly K - m vertices. Ties on the minimal ucb break to the
/// smallest id.
std::vector<Vertex> active_neighbors(const Vertex& v,
                                     std::span<const double> ucb_values);

/// The inverse relation: every u such that v is an active neighbor of u.
std::vector<Vertex> passive_neighbors(const Vertex& v,
                                      std::span<const double> ucb_values);

/// Metropolis search over the active/passive neighborhood with logarithmic
/// cooling. Uphill and equal moves are always accepted; downhill moves with
/// probability exp(-(E(V) - E(U)) / tau_j). Returns the best-energy vertex
/// visited. Deterministic given the seed.
Vertex sa_search(const RoundValues& values, const RewardConfig& cfg,
                 const SaParams& params, const Vertex& initial);

/// Baseline search over the dense single-swap neighborhood (all m (K - m)
/// swaps, re-enumerated every iteration) with C = 2 alpha + gamma + 1.
Vertex vanilla_sa_search(const RoundValues& values, const RewardConfig& cfg,
                         const SaParams& params, const Vertex& initial);

/// Draws one uniform sample from the deduplicated union of v's active and
/// passive neighbors without materializing it. Exposed for the distribution
/// tests; sa_search samples through this.
Vertex sample_tailored_neighbor(const Vertex& v,
                                std::span<const double> ucb_values,
                                std::span<const int> order_rank,
                                std::span<const int> sorted_users, Rng& rng,
                                bool* has_neighbor);

/// Ascending (ucb, id) order over all users: sorted_users lists 0-based user
/// indices, order_rank is the inverse permutation.
void build_ucb_order(std::span<const double> ucb_values,
                     std::vector<int>& sorted_users,
                     std::vector<int>& order_rank);

}  // namespace fedsel

#endif  // FEDSEL_SA_HPP_
