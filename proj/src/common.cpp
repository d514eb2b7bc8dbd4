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

#include "fedsel/common.hpp"

#include <algorithm>
#include <array>
#include <cstring>
#include <numbers>

namespace fedsel {

Vertex Vertex::of(std::vector<UserId> ids) {
  std::sort(ids.begin(), ids.end());
  require(!ids.empty(), "vertex must be nonempty");
  require(ids.front() >= 1, "user ids are 1-based");
  for (std::size_t i = 1; i < ids.size(); ++i) {
    require(ids[i] != ids[i - 1], "vertex members must be distinct");
  }
  Vertex v;
  v.members = std::move(ids);
  return v;
}

bool Vertex::contains(UserId k) const {
  return std::binary_search(members.begin(), members.end(), k);
}

std::string to_string(const Vertex& v, char sep) {
  std::string s;
  for (std::size_t i = 0; i < v.members.size(); ++i) {
    if (i > 0) s.push_back(sep);
    s += std::to_string(v.members[i]);
  }
  return s;
}

std::uint64_t mix_seed(std::uint64_t seed) {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t tag) {
  return mix_seed(seed ^ (tag + 0x9e3779b97f4a7c15ULL + (seed << 6) + (seed >> 2)));
}

std::uint64_t Rng::uniform_int(std::uint64_t n) {
  require(n > 0, "uniform_int needs n > 0");
  const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
  std::uint64_t x;
  do {
    x = gen_();
  } while (x >= limit);
  return x % n;
}

double Rng::normal() {
  if (have_spare_) {
    have_spare_ = false;
    return spare_;
  }
  const double u1 = uniform01();
  const double u2 = uniform01();
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double theta = 2.0 * std::numbers::pi * u2;
  spare_ = r * std::sin(theta);
  have_spare_ = true;
  return r * std::cos(theta);
}

std::uint64_t binomial_capped(int n, int k, std::uint64_t cap) {
  if (k < 0 || k > n) return 0;
  k = std::min(k, n - k);
  // Running product n!/(k!(n-k)!) stays integral when divided in order.
  long double acc = 1.0L;
  for (int i = 1; i <= k; ++i) {
    acc = acc * static_cast<long double>(n - k + i) / static_cast<long double>(i);
    if (acc > static_cast<long double>(cap) * 2.0L) return cap;
  }
  const std::uint64_t v = static_cast<std::uint64_t>(acc + 0.5L);
  return v > cap ? cap : v;
}

std::vector<int> first_combination(int k) {
  std::vector<int> c(static_cast<std::size_t>(k));
  for (int i = 0; i < k; ++i) c[static_cast<std::size_t>(i)] = i;
  return c;
}

bool next_combination(std::vector<int>& c, int n) {
  const int m = static_cast<int>(c.size());
  for (int i = m - 1; i >= 0; --i) {
    if (c[static_cast<std::size_t>(i)] < n - m + i) {
      ++c[static_cast<std::size_t>(i)];
      for (int j = i + 1; j < m; ++j) {
        c[static_cast<std::size_t>(j)] = c[static_cast<std::size_t>(j - 1)] + 1;
      }
      return true;
    }
  }
  return false;
}

std::vector<int> sort_indices_by_value_desc(std::span<const double> values) {
  struct Entry {
    std::uint64_t key;
    int id;
  };
  const std::size_t n = values.size();
  std::vector<Entry> a(n);
  std::vector<Entry> b(n);
  for (std::size_t i = 0; i < n; ++i) {
    std::uint64_t u;
    static_assert(sizeof(u) == sizeof(double));
    std::memcpy(&u, &values[i], sizeof(u));
    // Order-preserving image: flip the sign bit for positives, all bits for
    // negatives (ascending u == ascending value); invert for descending.
    u = (u >> 63) != 0 ? ~u : (u ^ 0x8000000000000000ULL);
    a[i] = {~u, static_cast<int>(i)};
  }
  // All eight digit histograms in one read; passes whose digit is constant
  // across the keys are no-ops and skipped.
  std::array<std::array<std::size_t, 257>, 8> count{};
  for (std::size_t i = 0; i < n; ++i) {
    const std::uint64_t key = a[i].key;
    for (int pass = 0; pass < 8; ++pass) {
      ++count[static_cast<std::size_t>(pass)][((key >> (8 * pass)) & 0xFF) + 1];
    }
  }
  for (int pass = 0; pass < 8; ++pass) {
    auto& c = count[static_cast<std::size_t>(pass)];
    bool degenerate = false;
    for (int d = 1; d <= 256; ++d) {
      if (c[static_cast<std::size_t>(d)] == n) degenerate = true;
      c[static_cast<std::size_t>(d)] += c[static_cast<std::size_t>(d - 1)];
    }
    if (degenerate) continue;
    const int shift = 8 * pass;
    for (std::size_t i = 0; i < n; ++i) {
      b[c[(a[i].key >> shift) & 0xFF]++] = a[i];
    }
    std::swap(a, b);
  }
  std::vector<int> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = a[i].id;
  return order;
}

void unrank_combination(int K, int m, std::uint64_t rank, std::vector<int>& out) {
  out.resize(static_cast<std::size_t>(m));
  int start = 0;
  for (int pos = 0; pos < m; ++pos) {
    for (int v = start; v < K; ++v) {
      const std::uint64_t c = binomial_capped(K - 1 - v, m - 1 - pos, UINT64_MAX);
      if (rank < c) {
        out[static_cast<std::size_t>(pos)] = v;
        start = v + 1;
        break;
      }
      rank -= c;
    }
  }
}

}  // namespace fedsel
