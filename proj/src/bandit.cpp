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

#include "fedsel/bandit.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>

#ifdef FEDSEL_HAVE_OPENMP
#include <omp.h>
#endif

namespace fedsel {

double ucb_index(double mu_hat, int T, double t, int m, double zeta) {
  if (T == 0) return std::numeric_limits<double>::infinity();
  return zeta * mu_hat + std::sqrt((m + 1) * std::log(t) / T);
}

SelectionState::SelectionState(int K, int m, PrivacySchedule schedule,
                               double zeta)
    : K_(K),
      m_(m),
      zeta_(zeta),
      T_(static_cast<std::size_t>(K), 0),
      mu_hat_(static_cast<std::size_t>(K), 0.0),
      ucb_(static_cast<std::size_t>(K),
           std::numeric_limits<double>::infinity()),
      ledger_(K, schedule) {
  require(K >= 1 && m >= 1 && m <= K, "need 1 <= m <= K");
  require(zeta > 0.0, "zeta must be positive");
}

std::size_t SelectionState::idx(UserId k) const {
  require(k >= 1 && k <= K_, "user id out of range");
  return static_cast<std::size_t>(k - 1);
}

void SelectionState::record_selection(UserId k) { T_[idx(k)] += 1; }

void SelectionState::update_mu(UserId k, double ratio) {
  require(ratio > 0.0 && ratio <= 1.0, "latency ratio must lie in (0,1]");
  const std::size_t i = idx(k);
  require(T_[i] >= 1, "update_mu before the selection was recorded");
  const double n = T_[i];
  mu_hat_[i] = (n - 1.0) / n * mu_hat_[i] + ratio / n;
}

void SelectionState::end_round() {
  t_ += 1;
  for (std::size_t i = 0; i < ucb_.size(); ++i) {
    ucb_[i] = ucb_index(mu_hat_[i], T_[i], static_cast<double>(t_), m_, zeta_);
  }
}

Vertex warmup_selection(int t, int K, int m) {
  require(m >= 1 && m <= K, "need 1 <= m <= K");
  const int rounds = (K + m - 1) / m;
  require(t >= 1 && t <= rounds, "round outside the warm-up range");
  std::vector<UserId> ids;
  ids.reserve(static_cast<std::size_t>(m));
  for (int j = 0; j < m; ++j) {
    ids.push_back(((t - 1) * m + j) % K + 1);
  }
  return Vertex::of(std::move(ids));
}

namespace {

struct Best {
  double score = -std::numeric_limits<double>::infinity();
  std::vector<int> members0;  // lexicographic tie-break holder

  void consider(double s, std::span<const int> cand) {
    if (s > score ||
        (s == score &&
         std::lexicographical_compare(cand.begin(), cand.end(),
                                      members0.begin(), members0.end()))) {
      score = s;
      members0.assign(cand.begin(), cand.end());
    }
  }
};

Vertex to_vertex(const std::vector<int>& members0) {
  std::vector<UserId> ids(members0.size());
  for (std::size_t i = 0; i < members0.size(); ++i) ids[i] = members0[i] + 1;
  return Vertex::of(std::move(ids));
}

void check_instance(const RoundValues& values, const RewardConfig& cfg, int m) {
  const int K = static_cast<int>(values.base.size());
  require(m >= 1, "m must be positive");
  require(K >= m, "need at least m users");
  cfg.validate(K);
  require(values.g.size() == values.base.size() &&
              values.p.size() == values.base.size(),
          "value arrays must have one entry per user");
}

}  // namespace

Vertex select_brute_serial(const RoundValues& values, const RewardConfig& cfg,
                           int m, std::uint64_t guard) {
  check_instance(values, cfg, m);
  const int K = static_cast<int>(values.base.size());
  const std::uint64_t count = binomial_capped(K, m, guard + 1);
  require(count <= guard, "candidate count exceeds the enumeration guard");

  SetScorer scorer(values.base, values.g, values.p, cfg, m);
  Best best;
  std::vector<int> comb = first_combination(m);
  do {
    best.consider(scorer.score_indices(comb), comb);
  } while (next_combination(comb, K));
  return to_vertex(best.members0);
}

Vertex select_brute(const RoundValues& values, const RewardConfig& cfg, int m,
                    const BruteOptions& opts) {
  check_instance(values, cfg, m);
  const int K = static_cast<int>(values.base.size());
  const std::uint64_t count = binomial_capped(K, m, opts.guard + 1);
  require(count <= opts.guard, "candidate count exceeds the enumeration guard");

#ifdef FEDSEL_HAVE_OPENMP
  if (opts.parallel && count >= 4096) {
    const int threads = omp_get_max_threads();
    std::vector<Best> partial(static_cast<std::size_t>(threads));
#pragma omp parallel num_threads(threads)
    {
      const int tid = omp_get_thread_num();
      const std::uint64_t lo = count * static_cast<std::uint64_t>(tid) /
                               static_cast<std::uint64_t>(threads);
      const std::uint64_t hi = count * static_cast<std::uint64_t>(tid + 1) /
                               static_cast<std::uint64_t>(threads);
      if (lo < hi) {
        SetScorer scorer(values.base, values.g, values.p, cfg, m);
        Best& local = partial[static_cast<std::size_t>(tid)];
        std::vector<int> comb;
        unrank_combination(K, m, lo, comb);
        for (std::uint64_t r = lo; r < hi; ++r) {
          local.consider(scorer.score_indices(comb), comb);
          if (r + 1 < hi) next_combination(comb, K);
        }
      }
    }
    Best best;
    for (const Best& b : partial) {
      if (!b.members0.empty()) best.consider(b.score, b.members0);
    }
    return to_vertex(best.members0);
  }
#endif
  return select_brute_serial(values, cfg, m, opts.guard);
}

Vertex select_pivot_fill(const RoundValues& values, const RewardConfig& cfg,
                         int m) {
  check_instance(values, cfg, m);
  require(cfg.phi == PhiVariant::kAveraged,
          "pivot-and-fill requires the averaged variant");
  const int K = static_cast<int>(values.base.size());

  // Users in descending ucb order; equal values break toward smaller ids so
  // that degenerate instances keep the lexicographic tie-break.
  const std::vector<int> order = sort_indices_by_value_desc(values.base);

  // Values packed in rank order so the pivot scan streams through memory.
  std::vector<double> rank_base(static_cast<std::size_t>(K));
  std::vector<double> rank_g(static_cast<std::size_t>(K));
  std::vector<double> rank_p(static_cast<std::size_t>(K));
  std::vector<double> fill(static_cast<std::size_t>(K));
  for (int r = 0; r < K; ++r) {
    const auto u = static_cast<std::size_t>(order[static_cast<std::size_t>(r)]);
    rank_base[static_cast<std::size_t>(r)] = values.base[u];
    rank_g[static_cast<std::size_t>(r)] = values.g[u];
    rank_p[static_cast<std::size_t>(r)] = values.p[u];
    fill[static_cast<std::size_t>(r)] =
        cfg.alpha * values.g[u] + cfg.gamma * values.p[u];
  }

  // Min-heap over (fill score, rank); holds the m-1 best fill scores among
  // users ranked above the current pivot, mirrored in heap_ranks together
  // with the running sums of their g and p values.
  using Entry = std::pair<double, int>;
  auto heap_less = [](const Entry& a, const Entry& b) { return a > b; };
  std::priority_queue<Entry, std::vector<Entry>, decltype(heap_less)> heap(heap_less);
  std::vector<int> heap_ranks;
  double sum_g = 0.0;
  double sum_p = 0.0;
  for (int r = 0; r < m - 1; ++r) {
    heap.emplace(fill[static_cast<std::size_t>(r)], r);
    heap_ranks.push_back(r);
    sum_g += rank_g[static_cast<std::size_t>(r)];
    sum_p += rank_p[static_cast<std::size_t>(r)];
  }

  // The scan ranks candidates with the O(1) running-sum expression; only the
  // winner is materialized. Ranking ties at the last-ulp level are broken by
  // the first (highest-ucb pivot) candidate, and the returned set is scored
  // through the same expression the exhaustive path uses, so equal-energy
  // outcomes remain exactly equal.
  double best_r = -std::numeric_limits<double>::infinity();
  int best_pivot_rank = -1;
  std::vector<int> best_heap_ranks;
  const auto consider_candidate = [&](int pivot_rank) {
    const auto pr = static_cast<std::size_t>(pivot_rank);
    const double r_val = rank_base[pr] + cfg.alpha * ((sum_g + rank_g[pr]) / m) +
                         cfg.gamma * ((sum_p + rank_p[pr]) / m);
    if (r_val > best_r) {
      best_r = r_val;
      best_pivot_rank = pivot_rank;
      best_heap_ranks = heap_ranks;
    }
  };

  for (int r = m - 1; r < K; ++r) {
    consider_candidate(r);
    if (m > 1) {
      const double s = fill[static_cast<std::size_t>(r)];
      if (s > heap.top().first) {
        const int evicted = heap.top().second;
        heap.pop();
        heap.emplace(s, r);
        *std::find(heap_ranks.begin(), heap_ranks.end(), evicted) = r;
        sum_g += rank_g[static_cast<std::size_t>(r)] -
                 rank_g[static_cast<std::size_t>(evicted)];
        sum_p += rank_p[static_cast<std::size_t>(r)] -
                 rank_p[static_cast<std::size_t>(evicted)];
      }
    }
  }
  // Re-check the lowest-ranked user against the final heap contents; only
  // valid when it was not swapped into the heap itself.
  if (m > 1 &&
      std::find(heap_ranks.begin(), heap_ranks.end(), K - 1) == heap_ranks.end()) {
    consider_candidate(K - 1);
  }

  std::vector<int> members0;
  members0.reserve(static_cast<std::size_t>(m));
  for (int r : best_heap_ranks) {
    members0.push_back(order[static_cast<std::size_t>(r)]);
  }
  members0.push_back(order[static_cast<std::size_t>(best_pivot_rank)]);
  std::sort(members0.begin(), members0.end());
  return to_vertex(members0);
}

Vertex select_genie(const RoundValues& values, const RewardConfig& cfg, int m,
                    const BruteOptions& opts) {
  return select_brute(values, cfg, m, opts);
}

}  // namespace fedsel
