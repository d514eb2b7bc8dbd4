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

#include "fedsel/metrics.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <map>
#include <numbers>

namespace fedsel {

double log_regret_bound(int K, int m, double delta, double delta_max, long n) {
  require(K >= 1 && m >= 1, "K and m must be positive");
  require(delta > 0.0, "delta must be positive");
  require(n >= 1, "horizon must be positive");
  const double log_term =
      4.0 * (m + 1) * std::log(static_cast<double>(n)) / (delta * delta);
  return K * (delta_max + delta) *
         (log_term + 1.0 + 2.0 * std::numbers::pi * std::numbers::pi / 3.0);
}

double delta_max_upper(std::span<const double> mu, const RewardConfig& cfg,
                       int m) {
  require(!mu.empty(), "need mean ratios");
  const auto [lo, hi] = std::minmax_element(mu.begin(), mu.end());
  const PhiRanges ranges = phi_ranges(cfg, m);
  return (*hi - *lo) + cfg.alpha * ranges.delta_phi_g +
         cfg.gamma * ranges.delta_phi_p;
}

std::pair<Vertex, double> enumerate_argmax(
    const std::function<double(const Vertex&)>& objective, int K, int m) {
  require(m >= 1 && m <= K, "need 1 <= m <= K");
  require(binomial_capped(K, m, 1'000'001) <= 1'000'000,
          "enumeration domain too large");
  Vertex best;
  double best_score = -std::numeric_limits<double>::infinity();
  std::vector<int> comb = first_combination(m);
  do {
    std::vector<UserId> ids(comb.size());
    for (std::size_t i = 0; i < comb.size(); ++i) ids[i] = comb[i] + 1;
    Vertex v = Vertex::of(std::move(ids));
    const double s = objective(v);
    if (s > best_score) {
      best_score = s;
      best = std::move(v);
    }
  } while (next_combination(comb, K));
  return {best, best_score};
}

std::vector<double> moving_average(std::span<const double> series, int window,
                                   bool* warned) {
  require(window >= 1, "window must be positive");
  if (warned != nullptr) *warned = false;
  if (window == 1) return {series.begin(), series.end()};
  if (static_cast<std::size_t>(window) > series.size()) {
    if (warned != nullptr) *warned = true;
    return {series.begin(), series.end()};
  }
  std::vector<double> out(series.size(), 0.0);
  double acc = 0.0;
  for (std::size_t i = 0; i < series.size(); ++i) {
    acc += series[i];
    if (i >= static_cast<std::size_t>(window)) acc -= series[i - static_cast<std::size_t>(window)];
    const std::size_t n = std::min(i + 1, static_cast<std::size_t>(window));
    out[i] = acc / static_cast<double>(n);
  }
  return out;
}

std::vector<SummaryRow> summarize(const ExperimentResult& result,
                                  std::span<const int> checkpoints, int window,
                                  const std::function<double(long)>& bound_at) {
  std::vector<SummaryRow> rows;
  // Group cells by policy, preserving configuration order.
  std::vector<std::string> policy_order;
  std::map<std::string, std::vector<const CellResult*>> groups;
  for (const CellResult& cell : result.cells) {
    const std::string name = policy_name(cell.policy);
    if (groups.find(name) == groups.end()) policy_order.push_back(name);
    groups[name].push_back(&cell);
  }

  for (const std::string& name : policy_order) {
    const auto& cells = groups[name];
    // Smooth each cell's accuracy series once; checkpoints sample from it.
    std::vector<std::vector<double>> smooth(cells.size());
    for (std::size_t i = 0; i < cells.size(); ++i) {
      std::vector<double> acc_series;
      acc_series.reserve(cells[i]->rounds.size());
      for (const RoundOutcome& o : cells[i]->rounds) acc_series.push_back(o.accuracy);
      smooth[i] = moving_average(acc_series, window);
    }
    for (int cp : checkpoints) {
      SummaryRow row;
      row.policy = name;
      row.checkpoint_n = cp;
      row.bound = bound_at ? bound_at(cp) : 0.0;
      double sum_r = 0.0, sum_r2 = 0.0, sum_acc = 0.0, sum_lat = 0.0;
      double leak = 0.0;
      int used = 0;
      for (std::size_t i = 0; i < cells.size(); ++i) {
        const CellResult* cell = cells[i];
        if (cell->rounds.empty()) continue;
        const std::size_t idx = std::min<std::size_t>(
            cell->rounds.size(), static_cast<std::size_t>(cp)) - 1;
        const RoundOutcome& r = cell->rounds[idx];
        sum_r += r.cum_regret;
        sum_r2 += r.cum_regret * r.cum_regret;
        sum_acc += smooth[i][idx];
        sum_lat += r.cum_latency;
        leak = std::max(leak, r.max_leakage);
        ++used;
      }
      if (used == 0) continue;
      row.mean_regret = sum_r / used;
      row.std_regret =
          used > 1 ? std::sqrt(std::max(0.0, sum_r2 / used -
                                                 row.mean_regret * row.mean_regret))
                   : 0.0;
      row.mean_accuracy = sum_acc / used;
      row.mean_cum_latency = sum_lat / used;
      row.max_leakage = leak;
      rows.push_back(std::move(row));
    }
  }
  return rows;
}

namespace {

void append_double(std::string& out, double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  out.append(buf, res.ptr);
}

}  // namespace

std::string summary_csv(std::span<const SummaryRow> rows) {
  std::string out =
      "policy,checkpoint_n,mean_regret,std_regret,bound,mean_accuracy,"
      "mean_cum_latency,max_leakage\n";
  for (const SummaryRow& r : rows) {
    out += r.policy;
    out.push_back(',');
    out += std::to_string(r.checkpoint_n);
    out.push_back(',');
    append_double(out, r.mean_regret);
    out.push_back(',');
    append_double(out, r.std_regret);
    out.push_back(',');
    append_double(out, r.bound);
    out.push_back(',');
    append_double(out, r.mean_accuracy);
    out.push_back(',');
    append_double(out, r.mean_cum_latency);
    out.push_back(',');
    append_double(out, r.max_leakage);
    out.push_back('\n');
  }
  return out;
}

std::vector<RoundsCsvRow> read_rounds_csv(const std::string& text) {
  std::vector<RoundsCsvRow> rows;
  std::size_t pos = 0;
  bool header = true;
  const auto next_line = [&](std::string& line) {
    if (pos >= text.size()) return false;
    const std::size_t nl = text.find('\n', pos);
    line = text.substr(pos, nl == std::string::npos ? nl : nl - pos);
    pos = nl == std::string::npos ? text.size() : nl + 1;
    return true;
  };
  std::string line;
  while (next_line(line)) {
    if (line.empty()) continue;
    if (header) {
      require(line.rfind("run_id,policy,seed,t,selected_ids", 0) == 0,
              "unexpected rounds CSV header");
      header = false;
      continue;
    }
    std::vector<std::string> fields;
    std::size_t start = 0;
    while (true) {
      const std::size_t comma = line.find(',', start);
      fields.push_back(line.substr(start, comma == std::string::npos
                                              ? comma
                                              : comma - start));
      if (comma == std::string::npos) break;
      start = comma + 1;
    }
    require(fields.size() == 12, "rounds CSV row must have 12 fields");
    RoundsCsvRow row;
    row.run_id = fields[0];
    row.policy = fields[1];
    row.seed = std::stoull(fields[2]);
    row.t = std::stoi(fields[3]);
    std::vector<UserId> ids;
    std::size_t p = 0;
    while (p < fields[4].size()) {
      const std::size_t semi = fields[4].find(';', p);
      ids.push_back(std::stoi(fields[4].substr(
          p, semi == std::string::npos ? semi : semi - p)));
      if (semi == std::string::npos) break;
      p = semi + 1;
    }
    row.selected = Vertex::of(std::move(ids));
    row.round_latency = std::stod(fields[5]);
    row.cum_latency = std::stod(fields[6]);
    row.accuracy = std::stod(fields[7]);
    row.max_leakage = std::stod(fields[8]);
    row.realized_reward = std::stod(fields[9]);
    row.genie_reward = std::stod(fields[10]);
    row.cum_regret = std::stod(fields[11]);
    rows.push_back(std::move(row));
  }
  return rows;
}

RegretFit fit_regret(std::span<const long> checkpoints,
                     std::span<const double> mean_regret,
                     const std::function<double(long)>& bound_at) {
  require(checkpoints.size() == mean_regret.size() && !checkpoints.empty(),
          "checkpoint and regret series must align");
  RegretFit fit;
  for (std::size_t i = 0; i < checkpoints.size(); ++i) {
    const double bound = bound_at(checkpoints[i]);
    fit.bound_constant = std::max(fit.bound_constant, bound);
    if (mean_regret[i] > bound) fit.violation = true;
  }
  const long n_max = *std::max_element(checkpoints.begin(), checkpoints.end());
  const long lo = n_max / 10;
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  int n = 0;
  for (std::size_t i = 0; i < checkpoints.size(); ++i) {
    if (checkpoints[i] < lo) continue;
    const double x = std::log(static_cast<double>(checkpoints[i]));
    const double y = mean_regret[i];
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    ++n;
  }
  require(n >= 2, "need at least two checkpoints in the last decade");
  fit.slope_vs_logn = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  return fit;
}

}  // namespace fedsel
