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

#ifndef FEDSEL_VERIFY_HPP_
#define FEDSEL_VERIFY_HPP_

#include <cstdint>
#include <string>
#include <vector>

#include "fedsel/engine.hpp"

namespace fedsel {

struct CheckResult {
  std::string name;
  bool pass = false;
  std::string details;
  double seconds = 0.0;
};

/// Solver equivalence: heap solver energy equals exhaustive-enumeration
/// energy on random instances, K in [6,20], m in [2,6]; exact equality.
CheckResult verify_pivot_fill(int instances = 10'000,
                              std::uint64_t seed = 2026);

/// Annealing optimality: hit rate of the max-energy set on seeded random
/// instances (K = 12, m = 4, 2000 iterations, kappa = 1); tailored >= 95%,
/// dense baseline >= 90%.
CheckResult verify_sa_optimality(int instances = 200,
                                 std::uint64_t seed = 2027);

/// Leakage cap over a long horizon for representative policies (closed-form
/// partial sums stay strictly under the budget) plus the Monte-Carlo LDP
/// ratio check of the Laplace mechanism for three (eps, sensitivity) pairs.
std::vector<CheckResult> verify_privacy(long horizon = 100'000,
                                        std::uint64_t seed = 2028);

/// Logarithmic regret: mean cumulative regret across seeds stays under the
/// bound at the 1e3 / 1e4 / 1e5 checkpoints and grows linearly in ln(n) over
/// the last decade.
CheckResult verify_regret(int num_seeds = 20, long horizon = 100'000);

/// Median per-round selection time ordering at K = 300, m = 15; exhaustive
/// search is reported via extrapolation behind the enumeration guard.
CheckResult verify_complexity(int rounds = 15);

/// Toy-task trend reproduction at K = 30, m = 5: clear-budget collapse of
/// full participation, latency advantage over random selection, and the
/// annealing policy tracking the exhaustive policy within two accuracy
/// points at matched latency.
std::vector<CheckResult> verify_trend(int num_seeds = 10, int rounds = 80);

/// Numerical hygiene: analytic vs finite-difference gradients, recursive vs
/// batch means, and the exact min-ratio/max-latency identity.
std::vector<CheckResult> verify_hygiene(std::uint64_t seed = 2031);

/// Runs the named suite ("pivotfill", "sa", "privacy", "regret",
/// "complexity", "trend", "hygiene", or "all"); prints one line per check.
/// Returns true iff everything passed.
bool run_verify_suite(const std::string& suite);

}  // namespace fedsel

#endif  // FEDSEL_VERIFY_HPP_
