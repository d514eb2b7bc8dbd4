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

#include "fedsel/privacy.hpp"

#include <cmath>

namespace fedsel {

PrivacySchedule::PrivacySchedule(double eps_bar, double eta)
    : eps_bar_(eps_bar), eta_(eta) {
  require(eps_bar > 0.0, "eps_bar must be positive");
  require(eta > 0.0, "eta must be positive");
}

double PrivacySchedule::eps_at(int i) const {
  require(i >= 1, "participation index starts at 1");
  return eps_bar_ * std::expm1(eta_) * std::exp(-eta_ * i);
}

double PrivacySchedule::partial_sum(int n) const {
  require(n >= 0, "partial sum over a nonnegative count");
  return eps_bar_ * -std::expm1(-eta_ * n);
}

long double PrivacySchedule::remaining_after(int n) const {
  require(n >= 0, "count must be nonnegative");
  return static_cast<long double>(eps_bar_) *
         expl(-static_cast<long double>(eta_) * n);
}

LeakageLedger::LeakageLedger(int num_users, PrivacySchedule schedule)
    : schedule_(schedule),
      count_(static_cast<std::size_t>(num_users), 0),
      spent_(static_cast<std::size_t>(num_users), 0.0) {
  require(num_users >= 1, "ledger needs at least one user");
}

std::size_t LeakageLedger::check(UserId k) const {
  require(k >= 1 && k <= num_users(), "user id out of range");
  return static_cast<std::size_t>(k - 1);
}

double LeakageLedger::charge(UserId k) {
  const std::size_t i = check(k);
  count_[i] += 1;
  const double eps = schedule_.eps_at(count_[i]);
  spent_[i] += eps;
  return eps;
}

double LeakageLedger::max_spent() const {
  double m = 0.0;
  for (double s : spent_) m = std::max(m, s);
  return m;
}

std::vector<double> clip_l1(std::vector<double> update, double bound) {
  require(bound > 0.0, "clip bound must be positive");
  double norm = 0.0;
  for (double x : update) norm += std::abs(x);
  if (norm > bound) {
    const double scale = bound / norm;
    for (double& x : update) x *= scale;
  }
  return update;
}

std::vector<double> privatize_update(std::vector<double> update,
                                     double sensitivity, double eps, Rng& rng) {
  require(sensitivity > 0.0, "sensitivity must be positive");
  require(eps > 0.0, "eps must be positive");
  const double scale = sensitivity / eps;
  for (double& x : update) x += rng.laplace(scale);
  return update;
}

}  // namespace fedsel
