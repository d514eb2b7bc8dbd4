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

#include "doctest.h"
#include "fedsel/common.hpp"
#include "fedsel/numerics.hpp"

using namespace fedsel;

TEST_CASE("vertex canonicalization and ordering") {
  const Vertex v = Vertex::of({3, 1, 2});
  CHECK(v.members == std::vector<UserId>{1, 2, 3});
  CHECK(v.contains(2));
  CHECK_FALSE(v.contains(4));
  CHECK(to_string(v) == "1;2;3");
  CHECK(Vertex::of({1, 2}) < Vertex::of({1, 3}));
  CHECK_THROWS_AS(Vertex::of({1, 1}), std::invalid_argument);
  CHECK_THROWS_AS(Vertex::of({0, 1}), std::invalid_argument);
}

TEST_CASE("rng determinism and ranges") {
  Rng a(42);
  Rng b(42);
  for (int i = 0; i < 1000; ++i) {
    const double x = a.uniform01();
    CHECK(x == b.uniform01());
    CHECK(x > 0.0);
    CHECK(x < 1.0);
  }
  Rng c(7);
  for (int i = 0; i < 1000; ++i) {
    CHECK(c.uniform_int(10) < 10);
  }
}

TEST_CASE("laplace draws have the right moments") {
  Rng rng(123);
  const double scale = 2.0;
  const int n = 100'000;
  double sum = 0.0;
  double sum2 = 0.0;
  for (int i = 0; i < n; ++i) {
    const double z = rng.laplace(scale);
    sum += z;
    sum2 += z * z;
  }
  const double mean = sum / n;
  const double var = sum2 / n - mean * mean;
  // Var = 2 scale^2 = 8; mean 0 within 3 sigma / sqrt(n).
  CHECK(std::abs(mean) < 3.0 * std::sqrt(8.0 / n));
  CHECK(var == doctest::Approx(8.0).epsilon(0.05));
}

TEST_CASE("normal draws match moments") {
  Rng rng(5);
  const int n = 100'000;
  double sum = 0.0;
  double sum2 = 0.0;
  for (int i = 0; i < n; ++i) {
    const double z = rng.normal(1.5, 0.5);
    sum += z;
    sum2 += z * z;
  }
  const double mean = sum / n;
  CHECK(mean == doctest::Approx(1.5).epsilon(0.005));
  CHECK(sum2 / n - mean * mean == doctest::Approx(0.25).epsilon(0.05));
}

TEST_CASE("combination enumeration and unranking agree") {
  const int K = 9;
  const int m = 4;
  std::vector<std::vector<int>> all;
  std::vector<int> comb = first_combination(m);
  do {
    all.push_back(comb);
  } while (next_combination(comb, K));
  CHECK(all.size() == binomial_capped(K, m, UINT64_MAX));
  CHECK(std::is_sorted(all.begin(), all.end()));
  for (std::size_t r = 0; r < all.size(); ++r) {
    std::vector<int> out;
    unrank_combination(K, m, r, out);
    CHECK(out == all[r]);
  }
}

TEST_CASE("binomial capping") {
  CHECK(binomial_capped(6, 2, 1000) == 15);
  CHECK(binomial_capped(300, 15, 1'000'000) == 1'000'000);
  CHECK(binomial_capped(5, 0, 10) == 1);
  CHECK(binomial_capped(5, 6, 10) == 0);
}

TEST_CASE("truncated normal mean closed form") {
  // mu = 1, sigma = 0.3, floor 0.5 (hand-checked against quadrature).
  CHECK(truncated_normal_mean(1.0, 0.3, 0.5) ==
        doctest::Approx(1.0313409360103174).epsilon(1e-12));
  CHECK(truncated_normal_mean(2.0, 0.0, 0.5) == 2.0);
  const double by_quad = truncated_normal_expectation(
      [](double x) { return x; }, 1.0, 0.3, 0.5);
  CHECK(by_quad == doctest::Approx(1.0313409360103174).epsilon(1e-9));
}

TEST_CASE("truncated normal expectation of the latency ratio") {
  const double v = truncated_normal_expectation(
      [](double x) { return 0.5 / x; }, 1.0, 0.3, 0.5);
  CHECK(v == doctest::Approx(0.5215532246406223).epsilon(1e-9));
}
