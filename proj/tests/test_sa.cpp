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

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include "doctest.h"
#include "fedsel/engine.hpp"
#include "fedsel/metrics.hpp"
#include "fedsel/sa.hpp"

using namespace fedsel;

namespace {

RoundValues random_values(Rng& rng, int K) {
  RoundValues v;
  for (int i = 0; i < K; ++i) {
    v.base.push_back(rng.uniform(0.0, 3.0));
    v.g.push_back(rng.uniform(-1.0, 1.0));
    v.p.push_back(rng.uniform01());
  }
  return v;
}

std::vector<Vertex> all_vertices(int K, int m) {
  std::vector<Vertex> out;
  std::vector<int> comb = first_combination(m);
  do {
    std::vector<UserId> ids;
    for (int c : comb) ids.push_back(c + 1);
    out.push_back(Vertex::of(ids));
  } while (next_combination(comb, K));
  return out;
}

}  // namespace

TEST_CASE("temperature coefficient sizing") {
  RewardConfig cfg;
  SUBCASE("degenerate spread leaves only the slack") {
    const std::vector<double> ucb = {1.0, 1.0, 1.0};
    CHECK(compute_c(ucb, cfg, 2, 1e-3) == doctest::Approx(1e-3).epsilon(1e-12));
  }
  SUBCASE("hand evaluation with averaged ranges") {
    RewardConfig weighted;
    weighted.alpha = 1.0;
    weighted.gamma = 1.0;
    const std::vector<double> ucb = {1.0, 0.8, 0.5};
    CHECK(compute_c(ucb, weighted, 2, 0.0) == doctest::Approx(3.3).epsilon(1e-12));
  }
  SUBCASE("exceeds every energy gap on enumerated instances") {
    Rng rng(41);
    for (int i = 0; i < 50; ++i) {
      RoundValues v = random_values(rng, 8);
      RewardConfig weighted;
      weighted.alpha = rng.uniform(0.0, 2.0);
      weighted.gamma = rng.uniform(0.0, 2.0);
      const double c = compute_c(v.base, weighted, 3, 1e-6);
      double lo = std::numeric_limits<double>::infinity();
      double hi = -lo;
      for (const Vertex& vert : all_vertices(8, 3)) {
        const double e = energy(vert, v.base, v.g, v.p, weighted);
        lo = std::min(lo, e);
        hi = std::max(hi, e);
      }
      CHECK(c > hi - lo);
    }
  }
  SUBCASE("needs finite ucb values") {
    const std::vector<double> ucb = {1.0, std::numeric_limits<double>::infinity()};
    CHECK_THROWS_AS(compute_c(ucb, cfg, 1, 1e-6), std::invalid_argument);
  }
}

TEST_CASE("dense-baseline temperature coefficient") {
  RewardConfig cfg;
  CHECK(compute_c_vanilla(cfg) == 1.0);
  cfg.alpha = 1.0;
  cfg.gamma = 0.5;
  CHECK(compute_c_vanilla(cfg) == 3.5);
}

TEST_CASE("active neighbors swap out the minimal-ucb member") {
  const std::vector<double> ucb = {0.1, 0.2, 0.3, 0.4};
  const auto n = active_neighbors(Vertex::of({1, 2}), ucb);
  REQUIRE(n.size() == 2);
  CHECK(std::find(n.begin(), n.end(), Vertex::of({2, 3})) != n.end());
  CHECK(std::find(n.begin(), n.end(), Vertex::of({2, 4})) != n.end());
}

TEST_CASE("active neighborhood size and single-member difference") {
  Rng rng(43);
  for (int i = 0; i < 50; ++i) {
    const int K = 5 + static_cast<int>(rng.uniform_int(6));
    const int m = 2 + static_cast<int>(rng.uniform_int(
        static_cast<std::uint64_t>(K - 2)));
    RoundValues v = random_values(rng, K);
    const Vertex vert = baseline_random(K, m, rng);
    const auto neighbors = active_neighbors(vert, v.base);
    CHECK(static_cast<int>(neighbors.size()) == K - m);
    for (const Vertex& u : neighbors) {
      std::vector<UserId> shared;
      std::set_intersection(u.members.begin(), u.members.end(),
                            vert.members.begin(), vert.members.end(),
                            std::back_inserter(shared));
      CHECK(static_cast<int>(shared.size()) == m - 1);
    }
  }
}

TEST_CASE("passive neighbors are exactly the inverse of active neighbors") {
  Rng rng(44);
  const int K = 8;
  const int m = 3;
  RoundValues v = random_values(rng, K);
  const auto vertices = all_vertices(K, m);
  for (const Vertex& vert : vertices) {
    std::set<Vertex> want;
    for (const Vertex& u : vertices) {
      const auto act = active_neighbors(u, v.base);
      if (std::find(act.begin(), act.end(), vert) != act.end()) want.insert(u);
    }
    const auto got_list = passive_neighbors(vert, v.base);
    const std::set<Vertex> got(got_list.begin(), got_list.end());
    CHECK(got == want);
    CHECK(got_list.size() == got.size());  // deduplicated
  }
}

TEST_CASE("neighbor relation is symmetric as a union") {
  Rng rng(45);
  const int K = 8;
  const int m = 3;
  RoundValues v = random_values(rng, K);
  const auto vertices = all_vertices(K, m);
  const auto union_neighbors = [&](const Vertex& a) {
    std::set<Vertex> s;
    for (const Vertex& u : active_neighbors(a, v.base)) s.insert(u);
    for (const Vertex& u : passive_neighbors(a, v.base)) s.insert(u);
    return s;
  };
  for (const Vertex& a : vertices) {
    const auto na = union_neighbors(a);
    for (const Vertex& b : na) {
      CHECK(union_neighbors(b).count(a) == 1);
    }
  }
}

TEST_CASE("tie handling: equal ucb values still give a unique minimal member") {
  const std::vector<double> ucb = {0.5, 0.5, 0.5, 0.5};
  const auto n = active_neighbors(Vertex::of({2, 3}), ucb);
  // Smallest id breaks the tie, so user 2 is swapped out.
  REQUIRE(n.size() == 2);
  CHECK(std::find(n.begin(), n.end(), Vertex::of({1, 3})) != n.end());
  CHECK(std::find(n.begin(), n.end(), Vertex::of({3, 4})) != n.end());
}

TEST_CASE("neighbor sampling matches the deduplicated union") {
  Rng rng(46);
  const int K = 8;
  const int m = 3;
  RoundValues v = random_values(rng, K);
  std::vector<int> sorted_users;
  std::vector<int> order_rank;
  build_ucb_order(v.base, sorted_users, order_rank);
  for (const Vertex& vert : {Vertex::of({1, 2, 3}), Vertex::of({4, 6, 8}),
                             Vertex::of({2, 5, 7})}) {
    std::set<Vertex> support;
    for (const Vertex& u : active_neighbors(vert, v.base)) support.insert(u);
    for (const Vertex& u : passive_neighbors(vert, v.base)) support.insert(u);

    std::map<Vertex, int> counts;
    const int draws = 40'000;
    Rng sample_rng(mix_seed(9, vert.members[0]));
    for (int i = 0; i < draws; ++i) {
      bool ok = true;
      const Vertex u = sample_tailored_neighbor(vert, v.base, order_rank,
                                                sorted_users, sample_rng, &ok);
      REQUIRE(ok);
      counts[u] += 1;
    }
    // Support matches exactly.
    CHECK(counts.size() == support.size());
    for (const auto& [u, c] : counts) {
      CHECK(support.count(u) == 1);
      // Uniform within 6 sigma.
      const double expect = static_cast<double>(draws) / support.size();
      CHECK(std::abs(c - expect) < 6.0 * std::sqrt(expect));
    }
  }
}

TEST_CASE("degenerate K = m has no neighbors and the search returns the start") {
  Rng rng(47);
  RoundValues v = random_values(rng, 4);
  RewardConfig cfg;
  SaParams params;
  params.max_iters = 100;
  params.seed = 3;
  const Vertex only = Vertex::of({1, 2, 3, 4});
  CHECK(sa_search(v, cfg, params, only) == only);
  CHECK(vanilla_sa_search(v, cfg, params, only) == only);
}

TEST_CASE("search is reproducible and best-so-far is monotone in the budget") {
  Rng rng(48);
  RoundValues v = random_values(rng, 12);
  RewardConfig cfg;
  cfg.alpha = 1.0;
  cfg.gamma = 1.0;
  Rng init_rng(5);
  const Vertex initial = baseline_random(12, 4, init_rng);

  SaParams p500;
  p500.max_iters = 500;
  p500.seed = 77;
  SaParams p2000;
  p2000.max_iters = 2000;
  p2000.seed = 77;

  const Vertex a = sa_search(v, cfg, p500, initial);
  const Vertex b = sa_search(v, cfg, p500, initial);
  CHECK(a == b);  // bit-reproducible under a fixed seed

  const double e500 = energy(a, v.base, v.g, v.p, cfg);
  const double e2000 =
      energy(sa_search(v, cfg, p2000, initial), v.base, v.g, v.p, cfg);
  CHECK(e2000 >= e500);
}

TEST_CASE("both searches find the enumerated maximum on a small graph") {
  Rng rng(49);
  int hits_tailored = 0;
  int hits_vanilla = 0;
  const int trials = 50;
  for (int i = 0; i < trials; ++i) {
    RoundValues v = random_values(rng, 12);
    RewardConfig cfg;
    cfg.alpha = rng.uniform(0.0, 2.0);
    cfg.gamma = rng.uniform(0.0, 2.0);
    const auto [best, best_energy] = enumerate_argmax(
        [&](const Vertex& s) { return energy(s, v.base, v.g, v.p, cfg); }, 12, 4);
    SaParams params;
    params.max_iters = 2000;
    params.seed = mix_seed(50, static_cast<std::uint64_t>(i));
    Rng init_rng(mix_seed(51, static_cast<std::uint64_t>(i)));
    const Vertex initial = baseline_random(12, 4, init_rng);
    if (energy(sa_search(v, cfg, params, initial), v.base, v.g, v.p, cfg) ==
        best_energy) {
      ++hits_tailored;
    }
    if (energy(vanilla_sa_search(v, cfg, params, initial), v.base, v.g, v.p,
               cfg) == best_energy) {
      ++hits_vanilla;
    }
  }
  CHECK(hits_tailored >= 47);
  CHECK(hits_vanilla >= 45);
}

TEST_CASE("long high-temperature run visits every vertex") {
  // Irreducibility, asserted empirically: a hot chain on K = 10, m = 3
  // touches all C(10,3) = 120 vertices.
  Rng rng(52);
  RoundValues v = random_values(rng, 10);
  RewardConfig cfg;
  cfg.alpha = 1.0;
  cfg.gamma = 1.0;

  std::vector<int> sorted_users;
  std::vector<int> order_rank;
  build_ucb_order(v.base, sorted_users, order_rank);
  std::set<Vertex> visited;
  Rng chain_rng(53);
  for (int start = 0; start < 100; ++start) {
    Vertex cur = baseline_random(10, 3, chain_rng);
    visited.insert(cur);
    for (int step = 0; step < 500; ++step) {
      bool ok = true;
      // Accept everything: the infinite-temperature limit of the chain.
      cur = sample_tailored_neighbor(cur, v.base, order_rank, sorted_users,
                                     chain_rng, &ok);
      REQUIRE(ok);
      visited.insert(cur);
    }
  }
  CHECK(visited.size() == 120);
}

TEST_CASE("dense neighborhood has m (K - m) members") {
  // One iteration from the energy-minimal start vertex returns whichever
  // neighbor was sampled (every move from the minimum is uphill), so the
  // support over many seeds is the whole single-swap neighborhood.
  Rng rng(54);
  RoundValues v = random_values(rng, 7);
  RewardConfig cfg;
  cfg.alpha = 1.0;
  cfg.gamma = 1.0;
  const auto [worst, unused] = enumerate_argmax(
      [&](const Vertex& s) { return -energy(s, v.base, v.g, v.p, cfg); }, 7, 3);
  std::set<Vertex> seen;
  for (int i = 0; i < 4000; ++i) {
    SaParams p;
    p.max_iters = 1;
    p.seed = static_cast<std::uint64_t>(i);
    const Vertex got = vanilla_sa_search(v, cfg, p, worst);
    if (!(got == worst)) seen.insert(got);
  }
  // m (K - m) = 3 * 4 = 12 distinct vertices reachable in one step.
  CHECK(seen.size() == 12);
}

TEST_CASE("acceptance probability stays within (0, 1]") {
  // With the sized temperature coefficient, |dE| < C and the downhill
  // exponent argument lies in (-kappa ln(1+j), 0).
  Rng rng(55);
  RoundValues v = random_values(rng, 9);
  RewardConfig cfg;
  cfg.alpha = 1.5;
  cfg.gamma = 0.5;
  const double c = compute_c(v.base, cfg, 3, 1e-6);
  const double kappa = 2.0;
  for (const Vertex& a : all_vertices(9, 3)) {
    for (const Vertex& b : all_vertices(9, 3)) {
      const double de = energy(b, v.base, v.g, v.p, cfg) -
                        energy(a, v.base, v.g, v.p, cfg);
      if (de >= 0) continue;
      for (int j : {1, 10, 1000}) {
        const double tau = c / (kappa * std::log1p(j));
        const double accept = std::exp(de / tau);
        CHECK(accept > 0.0);
        CHECK(accept <= 1.0);
        CHECK(de / tau > -kappa * std::log1p(j));
      }
    }
  }
}
