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

#include "fedsel/sa.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace fedsel {

namespace {

// Strict total order on users by (ucb, id); the "minimal ucb" member of a
// vertex is always unique under it.
bool order_less(int a, int b, std::span<const double> ucb) {
  const double ua = ucb[static_cast<std::size_t>(a)];
  const double ub = ucb[static_cast<std::size_t>(b)];
  if (ua != ub) return ua < ub;
  return a < b;
}

int min_member0(const Vertex& v, std::span<const double> ucb) {
  int best = v.members.front() - 1;
  for (UserId k : v.members) {
    const int i = k - 1;
    if (order_less(i, best, ucb)) best = i;
  }
  return best;
}

Vertex swap_member(const Vertex& v, UserId out, UserId in) {
  std::vector<UserId> ids;
  ids.reserve(v.members.size());
  for (UserId k : v.members) {
    if (k != out) ids.push_back(k);
  }
  ids.push_back(in);
  return Vertex::of(std::move(ids));
}

}  // namespace

void build_ucb_order(std::span<const double> ucb_values,
                     std::vector<int>& sorted_users,
                     std::vector<int>& order_rank) {
  const int K = static_cast<int>(ucb_values.size());
  sorted_users.resize(static_cast<std::size_t>(K));
  for (int i = 0; i < K; ++i) sorted_users[static_cast<std::size_t>(i)] = i;
  std::sort(sorted_users.begin(), sorted_users.end(),
            [&](int a, int b) { return order_less(a, b, ucb_values); });
  order_rank.resize(static_cast<std::size_t>(K));
  for (int r = 0; r < K; ++r) {
    order_rank[static_cast<std::size_t>(sorted_users[static_cast<std::size_t>(r)])] = r;
  }
}

double compute_c(std::span<const double> ucb_values, const RewardConfig& cfg,
                 int m, double omega) {
  const int K = static_cast<int>(ucb_values.size());
  require(K >= m && m >= 1, "need at least m users");
  for (double u : ucb_values) {
    require(std::isfinite(u), "temperature sizing needs finite ucb values");
  }
  std::vector<double> sorted(ucb_values.begin(), ucb_values.end());
  std::nth_element(sorted.begin(), sorted.begin() + (m - 1), sorted.end(),
                   std::greater<double>());
  const double ucb_m = sorted[static_cast<std::size_t>(m - 1)];
  const double ucb_min = *std::min_element(ucb_values.begin(), ucb_values.end());
  const PhiRanges ranges = phi_ranges(cfg, m);
  return (ucb_m - ucb_min) + cfg.alpha * ranges.delta_phi_g +
         cfg.gamma * ranges.delta_phi_p + omega;
}

double compute_c_vanilla(const RewardConfig& cfg) {
  return 2.0 * cfg.alpha + cfg.gamma + 1.0;
}

std::vector<Vertex> active_neighbors(const Vertex& v,
                                     std::span<const double> ucb_values) {
  const int K = static_cast<int>(ucb_values.size());
  const UserId out = min_member0(v, ucb_values) + 1;
  std::vector<Vertex> result;
  result.reserve(static_cast<std::size_t>(K - v.size()));
  for (UserId u = 1; u <= K; ++u) {
    if (!v.contains(u)) result.push_back(swap_member(v, out, u));
  }
  return result;
}

std::vector<Vertex> passive_neighbors(const Vertex& v,
                                      std::span<const double> ucb_values) {
  // u is a passive neighbor of v iff v is an active neighbor of u. With a
  // the order-minimal member and b the second-minimal, these are exactly:
  // (case a) any member except a replaced by an outside user ordered below
  // a, and (case b) a replaced by an outside user ordered below b.
  const int K = static_cast<int>(ucb_values.size());
  const int a = min_member0(v, ucb_values);
  int b = -1;
  for (UserId k : v.members) {
    const int i = k - 1;
    if (i == a) continue;
    if (b < 0 || order_less(i, b, ucb_values)) b = i;
  }
  std::vector<Vertex> result;
  for (UserId k : v.members) {
    if (k - 1 == a) continue;
    for (int u = 0; u < K; ++u) {
      if (order_less(u, a, ucb_values) && !v.contains(u + 1)) {
        result.push_back(swap_member(v, k, u + 1));
      }
    }
  }
  if (b >= 0) {
    for (int u = 0; u < K; ++u) {
      if (order_less(u, b, ucb_values) && !v.contains(u + 1)) {
        result.push_back(swap_member(v, a + 1, u + 1));
      }
    }
  }
  std::sort(result.begin(), result.end());
  result.erase(std::unique(result.begin(), result.end()), result.end());
  return result;
}

Vertex sample_tailored_neighbor(const Vertex& v,
                                std::span<const double> ucb_values,
                                std::span<const int> order_rank,
                                std::span<const int> sorted_users, Rng& rng,
                                bool* has_neighbor) {
  const int K = static_cast<int>(ucb_values.size());
  const int m = v.size();
  const int a = min_member0(v, ucb_values);
  // Every user ordered strictly below a is outside v, so a's ascending-order
  // rank counts the eligible case-a replacements.
  const int rank_a = order_rank[static_cast<std::size_t>(a)];

  const std::uint64_t n_active = static_cast<std::uint64_t>(K - m);
  const std::uint64_t n_case_a =
      static_cast<std::uint64_t>(m - 1) * static_cast<std::uint64_t>(rank_a);
  const std::uint64_t total = n_active + n_case_a;
  if (total == 0) {
    if (has_neighbor != nullptr) *has_neighbor = false;
    return v;
  }
  if (has_neighbor != nullptr) *has_neighbor = true;

  const std::uint64_t r = rng.uniform_int(total);
  if (r < n_active) {
    // r-th outside user in ascending id order replaces a.
    std::uint64_t skip = r;
    UserId u = 1;
    std::size_t mi = 0;
    while (true) {
      if (mi < v.members.size() && v.members[mi] == u) {
        ++mi;
        ++u;
        continue;
      }
      if (skip == 0) break;
      --skip;
      ++u;
    }
    return swap_member(v, a + 1, u);
  }
  const std::uint64_t q = r - n_active;
  const int drop_pos = static_cast<int>(q / static_cast<std::uint64_t>(rank_a));
  const int in_user = sorted_users[static_cast<std::size_t>(
      q % static_cast<std::uint64_t>(rank_a))];
  // drop_pos indexes v's members excluding a, in ascending id order.
  int seen = 0;
  UserId out = 0;
  for (UserId k : v.members) {
    if (k - 1 == a) continue;
    if (seen == drop_pos) {
      out = k;
      break;
    }
    ++seen;
  }
  return swap_member(v, out, in_user + 1);
}

namespace {

struct Chain {
  Vertex current;
  double current_energy;
  Vertex best;
  double best_energy;

  void visit(const Vertex& u, double e) {
    if (e > best_energy) {
      best = u;
      best_energy = e;
    }
  }
};

template <typename SampleFn>
Vertex run_chain(const RoundValues& values, const RewardConfig& cfg,
                 const SaParams& params, const Vertex& initial, double c,
                 SampleFn sample) {
  const int K = static_cast<int>(values.base.size());
  require(initial.size() >= 1 && initial.size() <= K, "invalid initial vertex");
  require(params.kappa >= 1.0, "kappa must be at least 1");
  require(c > 0.0, "temperature coefficient must be positive");

  SetScorer scorer(values.base, values.g, values.p, cfg, initial.size());
  Rng rng(params.seed);
  const double e0 = scorer.score(initial);
  Chain chain{initial, e0, initial, e0};

  const int iters = params.iterations(K);
  for (int j = 1; j <= iters; ++j) {
    bool has_neighbor = true;
    Vertex u = sample(chain.current, rng, &has_neighbor);
    if (!has_neighbor) break;  // only possible when K == m
    const double e = scorer.score(u);
    chain.visit(u, e);
    if (e >= chain.current_energy) {
      chain.current = std::move(u);
      chain.current_energy = e;
    } else {
      const double tau = c / (params.kappa * std::log1p(static_cast<double>(j)));
      const double accept = std::exp((e - chain.current_energy) / tau);
      if (rng.uniform01() <= accept) {
        chain.current = std::move(u);
        chain.current_energy = e;
      }
    }
  }
  return chain.best;
}

}  // namespace

Vertex sa_search(const RoundValues& values, const RewardConfig& cfg,
                 const SaParams& params, const Vertex& initial) {
  const double c = compute_c(values.base, cfg, initial.size(), params.omega);
  std::vector<int> sorted_users;
  std::vector<int> order_rank;
  build_ucb_order(values.base, sorted_users, order_rank);
  return run_chain(values, cfg, params, initial, c,
                   [&](const Vertex& v, Rng& rng, bool* ok) {
                     return sample_tailored_neighbor(v, values.base, order_rank,
                                                     sorted_users, rng, ok);
                   });
}

Vertex vanilla_sa_search(const RoundValues& values, const RewardConfig& cfg,
                         const SaParams& params, const Vertex& initial) {
  const double c = compute_c_vanilla(cfg);
  const int K = static_cast<int>(values.base.size());
  // The dense neighborhood is re-enumerated every iteration, as the baseline
  // prescribes: every (member, outside user) swap pair.
  std::vector<std::pair<UserId, UserId>> swaps;
  auto sample = [&](const Vertex& v, Rng& rng, bool* ok) {
    swaps.clear();
    for (UserId out : v.members) {
      for (UserId in = 1; in <= K; ++in) {
        if (!v.contains(in)) swaps.emplace_back(out, in);
      }
    }
    if (swaps.empty()) {
      *ok = false;
      return v;
    }
    *ok = true;
    const auto& pick = swaps[static_cast<std::size_t>(rng.uniform_int(swaps.size()))];
    return swap_member(v, pick.first, pick.second);
  };
  return run_chain(values, cfg, params, initial, c, sample);
}

}  // namespace fedsel
