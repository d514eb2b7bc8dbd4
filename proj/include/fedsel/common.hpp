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

#ifndef FEDSEL_COMMON_HPP_
#define FEDSEL_COMMON_HPP_

#include <cmath>
#include <compare>
#include <cstdint>
#include <functional>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace fedsel {

// User ids are 1-based throughout the public surface (configs, CSV, vertex
// members); dense per-user arrays are 0-based and indexed with id - 1.
using UserId = int;

/// A candidate selection: a canonical (ascending, duplicate-free) set of m
/// user ids. Vertices compare lexicographically, which is the tie-break order
/// used by every solver.
struct Vertex {
  std::vector<UserId> members;

  Vertex() = default;
  static Vertex of(std::vector<UserId> ids);

  int size() const { return static_cast<int>(members.size()); }
  bool contains(UserId k) const;

  auto operator<=>(const Vertex&) const = default;
};

std::string to_string(const Vertex& v, char sep = ';');

/// splitmix64 step; used to derive independent RNG streams from a master
/// seed plus a list of tags (policy id, round, purpose, ...).
std::uint64_t mix_seed(std::uint64_t seed);
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t tag);
template <typename... Tags>
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t tag, Tags... rest) {
  return mix_seed(mix_seed(seed, tag), rest...);
}

/// Deterministic RNG used everywhere. Wraps std::mt19937_64 with explicit,
/// platform-stable transforms (std::*_distribution are implementation
/// defined, which would break the byte-reproducibility contract).
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  /// Uniform on the open interval (0, 1), 52-bit granularity.
  double uniform01() {
    return (static_cast<double>(gen_() >> 12) + 0.5) * 0x1p-52;
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  /// Uniform integer in [0, n); rejection sampling, no modulo bias.
  std::uint64_t uniform_int(std::uint64_t n);

  /// Standard normal via Box-Muller (second draw cached).
  double normal();
  double normal(double mean, double stddev) { return mean + stddev * normal(); }

  /// Zero-mean Laplace with the given scale, via inverse CDF.
  double laplace(double scale) {
    const double u = uniform01() - 0.5;
    return -scale * (u < 0 ? -1.0 : 1.0) * std::log(1.0 - 2.0 * std::abs(u));
  }

  /// Fisher-Yates shuffle.
  template <typename T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) {
      std::swap(v[i - 1], v[static_cast<std::size_t>(uniform_int(i))]);
    }
  }

 private:
  std::mt19937_64 gen_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

/// C(n, k), saturating at `cap` (returns cap when the true value exceeds it).
std::uint64_t binomial_capped(int n, int k, std::uint64_t cap);

/// Lexicographically first k-combination of {0, ..., n-1}.
std::vector<int> first_combination(int k);

/// Advances `c` to the next k-combination of {0, ..., n-1} in lexicographic
/// order; returns false when `c` was the last one.
bool next_combination(std::vector<int>& c, int n);

/// Writes the `rank`-th (0-based, lexicographic) m-combination of
/// {0, ..., K-1} into `out`.
void unrank_combination(int K, int m, std::uint64_t rank, std::vector<int>& out);

/// Indices 0..n-1 ordered by (value descending, index ascending). LSD radix
/// sort over the order-preserving bit image of the doubles: linear time and
/// sequential passes, so selection stays flat through cache-size boundaries
/// that a comparison sort would trip over. Values must not be NaN.
std::vector<int> sort_indices_by_value_desc(std::span<const double> values);

inline void require(bool cond, const std::string& msg) {
  if (!cond) throw std::invalid_argument(msg);
}

}  // namespace fedsel

#endif  // FEDSEL_COMMON_HPP_
