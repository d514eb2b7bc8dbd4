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

#ifndef FEDSEL_BANDIT_HPP_
#define FEDSEL_BANDIT_HPP_

#include <cstdint>
#include <span>
#include <vector>

#include "fedsel/privacy.hpp"
#include "fedsel/reward.hpp"

namespace fedsel {

/// ucb index at the end of round t: zeta * mu_hat + sqrt((m+1) ln(t) / T),
/// +inf while the user is unvisited. zeta = 1 is the plain index; larger
/// values amplify exploitation for large networks.
double ucb_index(double mu_hat, int T, double t, int m, double zeta);

/// The bandit's mutable per-round knowledge: participation counts, empirical
/// latency-ratio means, ucb values, and the leakage ledger. Owned by one
/// simulation; updates are applied sequentially at round boundaries.
class SelectionState {
 public:
  SelectionState(int K, int m, PrivacySchedule schedule, double zeta);

  int K() const { return K_; }
  int m() const { return m_; }
  int round() const { return t_; }
  double zeta() const { return zeta_; }

  int T(UserId k) const { return T_[idx(k)]; }
  double mu_hat(UserId k) const { return mu_hat_[idx(k)]; }
  double ucb(UserId k) const { return ucb_[idx(k)]; }
  std::span<const double> ucb_values() const { return ucb_; }
  std::span<const double> mu_hat_values() const { return mu_hat_; }

  LeakageLedger& ledger() { return ledger_; }
  const LeakageLedger& ledger() const { return ledger_; }

  /// Counts one selection of user k this round (T_k increment).
  void record_selection(UserId k);

  /// Recursive empirical-mean update; requires T_k already incremented for
  /// this round's observation. Matches the batch mean exactly up to
  /// floating-point associativity.
  void update_mu(UserId k, double ratio);

  /// Closes round t: advances the counter and refreshes every ucb value.
  void end_round();

  /// Number of deterministic round-robin rounds before the index rule
  /// applies: ceil(K / m).
  int warmup_rounds() const { return (K_ + m_ - 1) / m_; }

 private:
  std::size_t idx(UserId k) const;

  int K_;
  int m_;
  int t_ = 0;
  double zeta_;
  std::vector<int> T_;
  std::vector<double> mu_hat_;
  std::vector<double> ucb_;
  LeakageLedger ledger_;
};

/// Deterministic warm-up selection for round t in [1, ceil(K/m)]: the block
/// {(t-1)m+1, ..., tm} clipped to K and wrapped around from id 1 when K is
/// not a multiple of m.
Vertex warmup_selection(int t, int K, int m);

/// Per-round inputs of the selection solvers: one value per user (index =
/// id - 1). `base` is the ucb array for the learned policy and the true mean
/// ratios for the oracle policy.
struct RoundValues {
  std::vector<double> base;
  std::vector<double> g;
  std::vector<double> p;
};

struct BruteOptions {
  bool parallel = true;          // use the OpenMP kernel for large counts
  std::uint64_t guard = 1'000'000;  // refuse enumerations beyond this
};

/// Exhaustive argmax of the set score over all C(K, m) candidate sets.
/// Ties break to the lexicographically smallest id-sorted set. The serial
/// reference enumerates in lexicographic order; the parallel kernel chunks
/// the combination ranks and reduces with the same total order, so both
/// return identical results.
Vertex select_brute(const RoundValues& values, const RewardConfig& cfg, int m,
                    const BruteOptions& opts = {});
Vertex select_brute_serial(const RoundValues& values, const RewardConfig& cfg,
                           int m, std::uint64_t guard = 1'000'000);

/// Exact argmax for the averaged variant in O(K log K): scan pivots in
/// descending ucb order while a min-heap maintains the m-1 best
/// alpha*g + gamma*p scores among the users ranked above the pivot.
Vertex select_pivot_fill(const RoundValues& values, const RewardConfig& cfg,
                         int m);

/// Oracle selection: same argmax machinery over the true mean ratios.
Vertex select_genie(const RoundValues& values, const RewardConfig& cfg, int m,
                    const BruteOptions& opts = {});

}  // namespace fedsel

#endif  // FEDSEL_BANDIT_HPP_
