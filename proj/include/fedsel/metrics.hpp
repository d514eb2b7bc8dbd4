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

#ifndef FEDSEL_METRICS_HPP_
#define FEDSEL_METRICS_HPP_

#include <functional>
#include <span>
#include <string>
#include <vector>

#include "fedsel/common.hpp"
#include "fedsel/engine.hpp"

namespace fedsel {

/// Logarithmic regret bound K (Δ_max + δ) (4 (m+1) ln(n) / δ² + 1 + 2π²/3);
/// natural log, zero log term at n = 1.
double log_regret_bound(int K, int m, double delta, double delta_max, long n);

/// Computable stand-in for the maximal per-round reward gap: the spread of
/// the true mean ratios plus the weighted ranges of the set-level terms.
/// Only ever looser than the true gap, so bound checks stay valid.
double delta_max_upper(std::span<const double> mu, const RewardConfig& cfg,
                       int m);

/// Exhaustive argmax of an arbitrary set objective; the test oracle for all
/// selection solvers. Guarded to C(K, m) <= 1e6 candidates. Ties break to
/// the lexicographically smallest set.
std::pair<Vertex, double> enumerate_argmax(
    const std::function<double(const Vertex&)>& objective, int K, int m);

/// Centered moving average; windows larger than the series leave it
/// untouched and set *warned.
std::vector<double> moving_average(std::span<const double> series, int window,
                                   bool* warned = nullptr);

struct SummaryRow {
  std::string policy;
  int checkpoint_n = 0;
  double mean_regret = 0.0;
  double std_regret = 0.0;
  double bound = 0.0;
  double mean_accuracy = 0.0;
  double mean_cum_latency = 0.0;
  double max_leakage = 0.0;
};

/// Per-policy aggregation across seeds at each checkpoint. Accuracy series
/// are smoothed with the window before sampling; stored per-round data stays
/// raw. `bound_at` supplies the regret-bound column (checkpoint -> value).
std::vector<SummaryRow> summarize(const ExperimentResult& result,
                                  std::span<const int> checkpoints, int window,
                                  const std::function<double(long)>& bound_at);

std::string summary_csv(std::span<const SummaryRow> rows);

/// One parsed row of the per-round CSV (the schema rounds_csv writes).
struct RoundsCsvRow {
  std::string run_id;
  std::string policy;
  std::uint64_t seed = 0;
  int t = 0;
  Vertex selected;
  double round_latency = 0.0;
  double cum_latency = 0.0;
  double accuracy = 0.0;
  double max_leakage = 0.0;
  double realized_reward = 0.0;
  double genie_reward = 0.0;
  double cum_regret = 0.0;
};

std::vector<RoundsCsvRow> read_rounds_csv(const std::string& text);

struct RegretFit {
  double slope_vs_logn = 0.0;
  double bound_constant = 0.0;
  bool violation = false;
};

/// Least-squares slope of mean regret against ln(n) over the last decade of
/// checkpoints, plus the bound-violation flag across all checkpoints.
RegretFit fit_regret(std::span<const long> checkpoints,
                     std::span<const double> mean_regret,
                     const std::function<double(long)>& bound_at);

}  // namespace fedsel

#endif  // FEDSEL_METRICS_HPP_
