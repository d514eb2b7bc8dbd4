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

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>

#include "CLI11.hpp"
#include "fedsel/config.hpp"
#include "fedsel/metrics.hpp"
#include "fedsel/verify.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitValidation = 1;
constexpr int kExitRuntime = 2;
constexpr int kExitVerification = 3;

void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << content;
}

int do_run(const fedsel::ExperimentConfig& cfg, const std::string& out_dir) {
  std::filesystem::create_directories(out_dir);
  const fedsel::ExperimentResult result = fedsel::run_experiment(cfg);

  std::vector<int> checkpoints = cfg.run.checkpoints;
  if (checkpoints.empty() && cfg.run.rounds > 0) checkpoints = {cfg.run.rounds};

  fedsel::RewardConfig rc;
  rc.alpha = cfg.reward.alpha;
  rc.gamma = cfg.reward.gamma;
  if (cfg.reward.clustered()) {
    rc.phi = fedsel::PhiVariant::kClustered;
    rc.rho = cfg.reward.rho;
  }
  const fedsel::Population& pop = result.population;
  std::function<double(long)> bound_at;
  if (pop.delta > 0.0) {
    const double dmax =
        fedsel::delta_max_upper(pop.true_mu, rc, cfg.population.m);
    bound_at = [&, dmax](long n) {
      return fedsel::log_regret_bound(pop.K(), cfg.population.m, pop.delta, dmax, n);
    };
  }

  const auto rows = fedsel::summarize(result, checkpoints, cfg.run.window, bound_at);
  write_file(std::filesystem::path(out_dir) / "rounds.csv",
             fedsel::rounds_csv(cfg, result));
  write_file(std::filesystem::path(out_dir) / "summary.csv",
             fedsel::summary_csv(rows));
  write_file(std::filesystem::path(out_dir) / "effective_config.ini",
             fedsel::render_config(cfg));
  std::printf("wrote %s/{rounds.csv,summary.csv,effective_config.ini}\n",
              out_dir.c_str());
  return kExitOk;
}

std::vector<double> parse_grid_values(const std::string& csv) {
  std::vector<double> values;
  std::string token;
  std::stringstream ss(csv);
  while (std::getline(ss, token, ',')) {
    if (!token.empty()) values.push_back(std::stod(token));
  }
  return values;
}

int do_sweep(const std::string& config_path, const std::string& grid_path,
             const std::string& out_dir) {
  const fedsel::ExperimentConfig base = fedsel::load_config(config_path);

  std::vector<double> alphas = {base.reward.alpha};
  std::vector<double> gammas = {base.reward.gamma};
  std::vector<double> eps_bars = {base.privacy.eps_bar};
  std::ifstream in(grid_path);
  if (!in) throw fedsel::ConfigError("cannot open grid file '" + grid_path + "'");
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    const auto eq = line.find('=');
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    if (eq == std::string::npos) {
      throw fedsel::ConfigError("grid line " + std::to_string(lineno) +
                                ": expected 'key = v1,v2,...'");
    }
    std::string key = line.substr(0, eq);
    key.erase(0, key.find_first_not_of(" \t"));
    key.erase(key.find_last_not_of(" \t") + 1);
    const std::vector<double> values = parse_grid_values(line.substr(eq + 1));
    if (values.empty()) {
      throw fedsel::ConfigError("grid key '" + key + "': empty value list");
    }
    if (key == "alpha") {
      alphas = values;
    } else if (key == "gamma") {
      gammas = values;
    } else if (key == "eps_bar") {
      eps_bars = values;
    } else {
      throw fedsel::ConfigError("grid key '" + key +
                                "' not sweepable (alpha, gamma, eps_bar)");
    }
  }

  for (double a : alphas) {
    for (double g : gammas) {
      for (double e : eps_bars) {
        fedsel::ExperimentConfig cfg = base;
        cfg.reward.alpha = a;
        cfg.reward.gamma = g;
        cfg.privacy.eps_bar = e;
        cfg.validate();
        char cell[96];
        std::snprintf(cell, sizeof(cell), "alpha%g_gamma%g_eps%g", a, g, e);
        const int rc = do_run(cfg, (std::filesystem::path(out_dir) / cell).string());
        if (rc != kExitOk) return rc;
      }
    }
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"privacy-aware user-selection simulator"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir = "out";
  std::string suite = "all";
  std::string grid_path;

  CLI::App* run = app.add_subcommand("run", "run the configured experiment");
  run->add_option("--config", config_path, "config file")->required();
  run->add_option("--out", out_dir, "output directory");

  CLI::App* verify = app.add_subcommand("verify", "run a verification suite");
  verify->add_option("--suite", suite,
                     "pivotfill|sa|privacy|regret|complexity|trend|hygiene|all");

  CLI::App* sweep = app.add_subcommand("sweep", "cartesian sweep over a grid");
  sweep->add_option("--config", config_path, "base config file")->required();
  sweep->add_option("--grid", grid_path, "grid file (alpha/gamma/eps_bar lists)")
      ->required();
  sweep->add_option("--out", out_dir, "output directory");

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed()) {
      return do_run(fedsel::load_config(config_path), out_dir);
    }
    if (verify->parsed()) {
      return fedsel::run_verify_suite(suite) ? kExitOk : kExitVerification;
    }
    if (sweep->parsed()) {
      return do_sweep(config_path, grid_path, out_dir);
    }
  } catch (const fedsel::ConfigError& e) {
    std::fprintf(stderr, "error: validation: %s\n", e.what());
    return kExitValidation;
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "error: validation: %s\n", e.what());
    return kExitValidation;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: runtime: %s\n", e.what());
    return kExitRuntime;
  }
  return kExitOk;
}
