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

#ifndef FEDSEL_TOY_MODEL_HPP_
#define FEDSEL_TOY_MODEL_HPP_

#include <span>
#include <vector>

#include "fedsel/common.hpp"
#include "fedsel/population.hpp"

namespace fedsel {

struct Sample {
  std::vector<double> x;
  int label = 0;
};

struct ToyConfig {
  bool train = true;
  int feature_dim = 2;
  int num_classes = 10;
  double blob_radius = 3.0;
  double blob_sigma = 0.8;
  int local_epochs = 1;
  int batch_size = 32;
  double learning_rate = 0.05;
  int test_samples = 1000;

  void validate() const;
};

/// Gaussian-blob classification task: class centers sit on a circle in the
/// first two feature dimensions. Per-user shards follow the population's
/// data sizes; in non-i.i.d. mode each user's dominant class holds the
/// configured fraction of its shard.
struct SyntheticTask {
  int d = 0;
  int classes = 0;
  std::vector<std::vector<Sample>> shards;  // index = user id - 1
  std::vector<Sample> test;
};

SyntheticTask make_task(const ToyConfig& cfg, const Population& pop, bool iid,
                        double dominant_fraction, Rng& rng);

/// Multinomial logistic model; weights laid out as C rows of (d weights +
/// bias).
class ToyModel {
 public:
  ToyModel(int feature_dim, int num_classes);

  int dim() const { return static_cast<int>(weights_.size()); }
  std::span<const double> weights() const { return weights_; }
  void add_update(std::span<const double> update, double weight);

  double loss(std::span<const Sample> data) const;
  double accuracy(std::span<const Sample> data) const;

  /// Mean softmax cross-entropy gradient over a batch, same layout as the
  /// weights.
  std::vector<double> gradient(std::span<const Sample> data) const;

  /// E local epochs of mini-batch gradient descent on the shard; returns the
  /// resulting weight delta without touching the model.
  std::vector<double> local_step(std::span<const Sample> shard,
                                 const ToyConfig& cfg, Rng& rng) const;

 private:
  int predict(const Sample& s) const;
  void logits(const Sample& s, std::span<const double> w,
              std::vector<double>& out) const;

  int d_;
  int classes_;
  std::vector<double> weights_;
};

}  // namespace fedsel

#endif  // FEDSEL_TOY_MODEL_HPP_
