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

// Benchmarks the OpenMP selection kernel against the serial reference and
// the heap/annealing solvers on one instance family.

#include <chrono>
#include <cstdio>
#include <vector>

#include "CLI11.hpp"
#include "fedsel/bandit.hpp"
#include "fedsel/engine.hpp"
#include "fedsel/sa.hpp"

namespace {

using Clock = std::chrono::steady_clock;

double time_once(const std::function<void()>& fn) {
  const auto t0 = Clock::now();
  fn();
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  return v[v.size() / 2];
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"selection kernel benchmark"};
  int K = 24;
  int m = 5;
  int reps = 9;
  app.add_option("--K", K, "number of users");
  app.add_option("--m", m, "set size");
  app.add_option("--reps", reps, "repetitions per kernel");
  CLI11_PARSE(app, argc, argv);

  fedsel::Rng rng(42);
  fedsel::RoundValues values;
  values.base.resize(static_cast<std::size_t>(K));
  values.g.resize(static_cast<std::size_t>(K));
  values.p.resize(static_cast<std::size_t>(K));
  for (int i = 0; i < K; ++i) {
    values.base[static_cast<std::size_t>(i)] = rng.uniform(0.0, 3.0);
    values.g[static_cast<std::size_t>(i)] = rng.uniform(-1.0, 1.0);
    values.p[static_cast<std::size_t>(i)] = rng.uniform(0.0, 1.0);
  }
  fedsel::RewardConfig cfg;
  cfg.alpha = 1.0;
  cfg.gamma = 1.0;

  const std::uint64_t count = fedsel::binomial_capped(K, m, 2'000'000);
  std::printf("K=%d m=%d candidates=%llu reps=%d\n", K, m,
              static_cast<unsigned long long>(count), reps);

  std::vector<double> t_serial, t_parallel, t_pivot, t_sa;
  fedsel::Vertex v_serial, v_parallel;
  for (int r = 0; r < reps; ++r) {
    t_serial.push_back(time_once([&] {
      v_serial = fedsel::select_brute_serial(values, cfg, m, 2'000'000);
    }));
    t_parallel.push_back(time_once([&] {
      v_parallel = fedsel::select_brute(values, cfg, m, {true, 2'000'000});
    }));
    t_pivot.push_back(time_once([&] { fedsel::select_pivot_fill(values, cfg, m); }));
    fedsel::SaParams params;
    params.max_iters = 50 * K;
    params.seed = 7 + static_cast<std::uint64_t>(r);
    fedsel::Rng init_rng(11 + static_cast<std::uint64_t>(r));
    const fedsel::Vertex initial = fedsel::baseline_random(K, m, init_rng);
    t_sa.push_back(time_once([&] { fedsel::sa_search(values, cfg, params, initial); }));
  }

  std::printf("serial brute     %10.4f ms\n", median(t_serial) * 1e3);
  std::printf("parallel brute   %10.4f ms (same result: %s)\n",
              median(t_parallel) * 1e3,
              v_serial == v_parallel ? "yes" : "NO");
  std::printf("pivot_fill       %10.4f ms\n", median(t_pivot) * 1e3);
  std::printf("sa (50K iters)   %10.4f ms\n", median(t_sa) * 1e3);
  return v_serial == v_parallel ? 0 : 1;
}
