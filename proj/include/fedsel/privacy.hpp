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

#ifndef FEDSEL_PRIVACY_HPP_
#define FEDSEL_PRIVACY_HPP_

#include <vector>

#include "fedsel/common.hpp"

namespace fedsel {

/// Geometrically decaying per-participation privacy budgets. The i-th time a
/// user uploads, it is granted eps_bar * (e^eta - 1) * e^(-eta i); the series
/// sums to eps_bar, so cumulative leakage stays strictly below the total
/// budget for any number of rounds.
class PrivacySchedule {
 public:
  PrivacySchedule(double eps_bar, double eta);

  double eps_bar() const { return eps_bar_; }
  double eta() const { return eta_; }

  /// Budget for the i-th participation (i >= 1).
  double eps_at(int i) const;

  /// Closed-form partial sum eps_bar * (1 - e^(-eta n)).
  double partial_sum(int n) const;

  /// Budget still unspent after n participations, eps_bar * e^(-eta n),
  /// in extended precision. Strictly positive for every n reachable in a
  /// simulation; this is the quantity the leakage-cap checks compare, since
  /// a running double sum cannot preserve the strict inequality once the
  /// remainder drops below one ulp of eps_bar.
  long double remaining_after(int n) const;

 private:
  double eps_bar_;
  double eta_;
};

/// Cumulative per-user LDP accounting under sequential composition. The
/// participation counts are the bandit's T_k; spent budgets are the running
/// sums of the schedule's terms.
class LeakageLedger {
 public:
  LeakageLedger(int num_users, PrivacySchedule schedule);

  /// Records one participation of user k and returns the epsilon granted for
  /// this round (the LDP level of k's Laplace mechanism).
  double charge(UserId k);

  int participation(UserId k) const { return count_[check(k)]; }
  double spent(UserId k) const { return spent_[check(k)]; }
  long double remaining(UserId k) const {
    return schedule_.remaining_after(count_[check(k)]);
  }

  double max_spent() const;
  int num_users() const { return static_cast<int>(count_.size()); }
  const PrivacySchedule& schedule() const { return schedule_; }

 private:
  std::size_t check(UserId k) const;

  PrivacySchedule schedule_;
  std::vector<int> count_;
  std::vector<double> spent_;
};

/// L1-clips the update to the given bound (identity when already inside).
std::vector<double> clip_l1(std::vector<double> update, double bound);

/// Laplace mechanism: adds i.i.d. Laplace(0, sensitivity/eps) noise per
/// coordinate, achieving eps-LDP for updates of L1-sensitivity `sensitivity`.
std::vector<double> privatize_update(std::vector<double> update,
                                     double sensitivity, double eps, Rng& rng);

}  // namespace fedsel

#endif  // FEDSEL_PRIVACY_HPP_
