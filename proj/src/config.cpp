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

#include "fedsel/config.hpp"

#include <charconv>
#include <climits>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

namespace fedsel {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> parts;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, sep)) parts.push_back(trim(item));
  if (!parts.empty() && parts.back().empty()) parts.pop_back();
  return parts;
}

struct Parser {
  std::map<std::string, std::pair<std::string, int>> kv;  // key -> (value, line)

  [[noreturn]] void fail(const std::string& key, const std::string& why) const {
    const auto it = kv.find(key);
    std::string msg = "config key '" + key + "': " + why;
    if (it != kv.end()) msg += " (line " + std::to_string(it->second.second) + ")";
    throw ConfigError(msg);
  }

  template <typename T, typename Fn>
  void set(const std::string& key, T& out, Fn convert) {
    auto it = kv.find(key);
    if (it == kv.end()) return;
    try {
      out = convert(it->second.first);
    } catch (const std::exception& e) {
      fail(key, e.what());
    }
    kv.erase(it);
  }
};

double to_double(const std::string& s) {
  std::size_t pos = 0;
  const double v = std::stod(s, &pos);
  if (pos != s.size()) throw std::invalid_argument("not a number: '" + s + "'");
  return v;
}

long to_long(const std::string& s) {
  std::size_t pos = 0;
  const long v = std::stol(s, &pos);
  if (pos != s.size()) throw std::invalid_argument("not an integer: '" + s + "'");
  return v;
}

int to_int(const std::string& s) {
  const long v = to_long(s);
  if (v < INT_MIN || v > INT_MAX) throw std::invalid_argument("out of range");
  return static_cast<int>(v);
}

bool to_bool(const std::string& s) {
  if (s == "true" || s == "1" || s == "yes") return true;
  if (s == "false" || s == "0" || s == "no") return false;
  throw std::invalid_argument("not a boolean: '" + s + "'");
}

std::uint64_t to_u64(const std::string& s) {
  std::size_t pos = 0;
  const unsigned long long v = std::stoull(s, &pos);
  if (pos != s.size()) throw std::invalid_argument("not an integer: '" + s + "'");
  return v;
}

}  // namespace

ExperimentConfig parse_config(const std::string& text) {
  Parser p;
  std::stringstream ss(text);
  std::string line;
  int lineno = 0;
  while (std::getline(ss, line)) {
    ++lineno;
    const std::string stripped = trim(line.substr(0, line.find('#')));
    if (stripped.empty()) continue;
    const auto eq = stripped.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("line " + std::to_string(lineno) +
                        ": expected 'key = value', got '" + stripped + "'");
    }
    const std::string key = trim(stripped.substr(0, eq));
    const std::string value = trim(stripped.substr(eq + 1));
    if (key.empty()) {
      throw ConfigError("line " + std::to_string(lineno) + ": empty key");
    }
    if (p.kv.count(key) != 0) {
      throw ConfigError("line " + std::to_string(lineno) + ": duplicate key '" +
                        key + "'");
    }
    p.kv[key] = {value, lineno};
  }

  ExperimentConfig cfg;
  auto& pop = cfg.population;
  p.set("K", pop.K, to_int);
  p.set("m", pop.m, to_int);
  p.set("tau_min", pop.tau_min, to_double);
  p.set("fast_mean", pop.fast_mean, to_double);
  p.set("slow_mean", pop.slow_mean, to_double);
  p.set("fast_std", pop.fast_std, to_double);
  p.set("slow_std", pop.slow_std, to_double);
  p.set("mean_step", pop.mean_step, to_double);
  p.set("iid", pop.iid, to_bool);
  p.set("total_data", pop.total_data, to_long);
  p.set("dirichlet_alpha", pop.dirichlet_alpha, to_double);
  p.set("dominant_fraction", pop.dominant_fraction, to_double);
  p.set("num_clusters", pop.num_clusters, to_int);

  p.set("eps_bar", cfg.privacy.eps_bar, to_double);
  p.set("eta", cfg.privacy.eta, to_double);
  p.set("clip_bound", cfg.privacy.clip_bound, to_double);

  p.set("alpha", cfg.reward.alpha, to_double);
  p.set("gamma", cfg.reward.gamma, to_double);
  p.set("beta", cfg.reward.beta, to_double);
  p.set("phi", cfg.reward.phi, [](const std::string& s) { return s; });
  p.set("rho", cfg.reward.rho, to_double);
  p.set("delta_tau", cfg.reward.delta_tau, to_double);

  p.set("zeta", cfg.bandit.zeta, to_double);
  p.set("brute_guard", cfg.bandit.brute_guard, to_u64);

  p.set("kappa", cfg.sa.kappa, to_double);
  p.set("sa_iters", cfg.sa.iters, to_int);
  p.set("omega", cfg.sa.omega, to_double);

  p.set("train", cfg.toy.train, to_bool);
  p.set("feature_dim", cfg.toy.feature_dim, to_int);
  p.set("num_classes", cfg.toy.num_classes, to_int);
  p.set("blob_radius", cfg.toy.blob_radius, to_double);
  p.set("blob_sigma", cfg.toy.blob_sigma, to_double);
  p.set("local_epochs", cfg.toy.local_epochs, to_int);
  p.set("batch_size", cfg.toy.batch_size, to_int);
  p.set("learning_rate", cfg.toy.learning_rate, to_double);
  p.set("test_samples", cfg.toy.test_samples, to_int);

  p.set("rounds", cfg.run.rounds, to_int);
  p.set("seeds", cfg.run.seeds, [](const std::string& s) {
    std::vector<std::uint64_t> seeds;
    for (const std::string& part : split(s, ',')) seeds.push_back(to_u64(part));
    if (seeds.empty()) throw std::invalid_argument("empty seed list");
    return seeds;
  });
  p.set("policies", cfg.run.policies, [](const std::string& s) {
    std::vector<Policy> policies;
    for (const std::string& part : split(s, ',')) {
      const auto parsed = parse_policy(part);
      if (!parsed) throw std::invalid_argument("unknown policy '" + part + "'");
      policies.push_back(*parsed);
    }
    if (policies.empty()) throw std::invalid_argument("empty policy list");
    return policies;
  });
  p.set("run_id", cfg.run.run_id, [](const std::string& s) {
    if (s.find(',') != std::string::npos) {
      throw std::invalid_argument("run_id must not contain commas");
    }
    return s;
  });
  p.set("window", cfg.run.window, to_int);
  p.set("checkpoints", cfg.run.checkpoints, [](const std::string& s) {
    std::vector<int> cps;
    for (const std::string& part : split(s, ',')) cps.push_back(to_int(part));
    return cps;
  });
  p.set("threads", cfg.run.threads, to_int);

  if (!p.kv.empty()) {
    const auto& [key, value_line] = *p.kv.begin();
    throw ConfigError("unknown config key '" + key + "' (line " +
                      std::to_string(value_line.second) + ")");
  }

  try {
    cfg.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("invalid config: ") + e.what());
  }
  return cfg;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_config(buffer.str());
}

namespace {

std::string fmt(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

}  // namespace

std::string render_config(const ExperimentConfig& cfg) {
  std::string out;
  const auto& pop = cfg.population;
  out += "# population\n";
  out += "K = " + std::to_string(pop.K) + "\n";
  out += "m = " + std::to_string(pop.m) + "\n";
  out += "tau_min = " + fmt(pop.tau_min) + "\n";
  out += "fast_mean = " + fmt(pop.fast_mean) + "\n";
  out += "slow_mean = " + fmt(pop.slow_mean) + "\n";
  out += "fast_std = " + fmt(pop.fast_std) + "\n";
  out += "slow_std = " + fmt(pop.slow_std) + "\n";
  out += "mean_step = " + fmt(pop.mean_step) + "\n";
  out += std::string("iid = ") + (pop.iid ? "true" : "false") + "\n";
  out += "total_data = " + std::to_string(pop.total_data) + "\n";
  out += "dirichlet_alpha = " + fmt(pop.dirichlet_alpha) + "\n";
  out += "dominant_fraction = " + fmt(pop.dominant_fraction) + "\n";
  out += "num_clusters = " + std::to_string(pop.num_clusters) + "\n";
  out += "# privacy\n";
  out += "eps_bar = " + fmt(cfg.privacy.eps_bar) + "\n";
  out += "eta = " + fmt(cfg.privacy.eta) + "\n";
  out += "clip_bound = " + fmt(cfg.privacy.clip_bound) + "\n";
  out += "# reward\n";
  out += "alpha = " + fmt(cfg.reward.alpha) + "\n";
  out += "gamma = " + fmt(cfg.reward.gamma) + "\n";
  out += "beta = " + fmt(cfg.reward.beta) + "\n";
  out += "phi = " + cfg.reward.phi + "\n";
  out += "rho = " + fmt(cfg.reward.rho) + "\n";
  out += "delta_tau = " + fmt(cfg.reward.delta_tau) + "\n";
  out += "# bandit\n";
  out += "zeta = " + fmt(cfg.bandit.zeta) + "\n";
  out += "brute_guard = " + std::to_string(cfg.bandit.brute_guard) + "\n";
  out += "# annealing\n";
  out += "kappa = " + fmt(cfg.sa.kappa) + "\n";
  out += "sa_iters = " + std::to_string(cfg.sa.iters) + "\n";
  out += "omega = " + fmt(cfg.sa.omega) + "\n";
  out += "# toy task\n";
  out += std::string("train = ") + (cfg.toy.train ? "true" : "false") + "\n";
  out += "feature_dim = " + std::to_string(cfg.toy.feature_dim) + "\n";
  out += "num_classes = " + std::to_string(cfg.toy.num_classes) + "\n";
  out += "blob_radius = " + fmt(cfg.toy.blob_radius) + "\n";
  out += "blob_sigma = " + fmt(cfg.toy.blob_sigma) + "\n";
  out += "local_epochs = " + std::to_string(cfg.toy.local_epochs) + "\n";
  out += "batch_size = " + std::to_string(cfg.toy.batch_size) + "\n";
  out += "learning_rate = " + fmt(cfg.toy.learning_rate) + "\n";
  out += "test_samples = " + std::to_string(cfg.toy.test_samples) + "\n";
  out += "# run\n";
  out += "rounds = " + std::to_string(cfg.run.rounds) + "\n";
  out += "seeds = ";
  for (std::size_t i = 0; i < cfg.run.seeds.size(); ++i) {
    if (i > 0) out += ",";
    out += std::to_string(cfg.run.seeds[i]);
  }
  out += "\npolicies = ";
  for (std::size_t i = 0; i < cfg.run.policies.size(); ++i) {
    if (i > 0) out += ",";
    out += policy_name(cfg.run.policies[i]);
  }
  out += "\nrun_id = " + cfg.run.run_id + "\n";
  out += "window = " + std::to_string(cfg.run.window) + "\n";
  if (!cfg.run.checkpoints.empty()) {
    out += "checkpoints = ";
    for (std::size_t i = 0; i < cfg.run.checkpoints.size(); ++i) {
      if (i > 0) out += ",";
      out += std::to_string(cfg.run.checkpoints[i]);
    }
    out += "\n";
  }
  out += "threads = " + std::to_string(cfg.run.threads) + "\n";
  return out;
}

}  // namespace fedsel
