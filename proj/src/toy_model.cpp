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

#include "fedsel/toy_model.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace fedsel {

void ToyConfig::validate() const {
  require(feature_dim >= 2, "need at least two feature dimensions");
  require(num_classes >= 2, "need at least two classes");
  require(blob_radius > 0.0 && blob_sigma > 0.0, "blob geometry must be positive");
  require(local_epochs >= 1, "need at least one local epoch");
  require(batch_size >= 1, "batch size must be positive");
  require(learning_rate >= 0.0, "learning rate must be nonnegative");
  require(test_samples >= 1, "need a validation set");
}

namespace {

Sample draw_sample(const ToyConfig& cfg, int label, Rng& rng) {
  Sample s;
  s.label = label;
  s.x.resize(static_cast<std::size_t>(cfg.feature_dim), 0.0);
  const double angle = 2.0 * std::numbers::pi * label / cfg.num_classes;
  s.x[0] = cfg.blob_radius * std::cos(angle);
  s.x[1] = cfg.blob_radius * std::sin(angle);
  for (double& v : s.x) v += cfg.blob_sigma * rng.normal();
  return s;
}

}  // namespace

SyntheticTask make_task(const ToyConfig& cfg, const Population& pop, bool iid,
                        double dominant_fraction, Rng& rng) {
  cfg.validate();
  SyntheticTask task;
  task.d = cfg.feature_dim;
  task.classes = cfg.num_classes;
  task.shards.resize(pop.users.size());
  for (const UserProfile& u : pop.users) {
    auto& shard = task.shards[static_cast<std::size_t>(u.id - 1)];
    shard.reserve(static_cast<std::size_t>(u.data_size));
    const int dominant = (u.id - 1) % cfg.num_classes;
    for (long i = 0; i < u.data_size; ++i) {
      int label;
      if (iid) {
        label = static_cast<int>(rng.uniform_int(
            static_cast<std::uint64_t>(cfg.num_classes)));
      } else if (rng.uniform01() < dominant_fraction) {
        label = dominant;
      } else {
        label = static_cast<int>(rng.uniform_int(
            static_cast<std::uint64_t>(cfg.num_classes - 1)));
        if (label >= dominant) ++label;
      }
      shard.push_back(draw_sample(cfg, label, rng));
    }
  }
  task.test.reserve(static_cast<std::size_t>(cfg.test_samples));
  for (int i = 0; i < cfg.test_samples; ++i) {
    const int label = static_cast<int>(rng.uniform_int(
        static_cast<std::uint64_t>(cfg.num_classes)));
    task.test.push_back(draw_sample(cfg, label, rng));
  }
  return task;
}

ToyModel::ToyModel(int feature_dim, int num_classes)
    : d_(feature_dim),
      classes_(num_classes),
      weights_(static_cast<std::size_t>(num_classes) *
                   static_cast<std::size_t>(feature_dim + 1),
               0.0) {}

void ToyModel::add_update(std::span<const double> update, double weight) {
  require(update.size() == weights_.size(), "update dimension mismatch");
  for (std::size_t i = 0; i < weights_.size(); ++i) {
    weights_[i] += weight * update[i];
  }
}

void ToyModel::logits(const Sample& s, std::span<const double> w,
                      std::vector<double>& out) const {
  out.assign(static_cast<std::size_t>(classes_), 0.0);
  const std::size_t row = static_cast<std::size_t>(d_) + 1;
  for (int c = 0; c < classes_; ++c) {
    const double* wc = w.data() + static_cast<std::size_t>(c) * row;
    double z = wc[d_];  // bias
    for (int j = 0; j < d_; ++j) z += wc[j] * s.x[static_cast<std::size_t>(j)];
    out[static_cast<std::size_t>(c)] = z;
  }
}

namespace {

void softmax_inplace(std::vector<double>& z) {
  const double zmax = *std::max_element(z.begin(), z.end());
  double sum = 0.0;
  for (double& v : z) {
    v = std::exp(v - zmax);
    sum += v;
  }
  for (double& v : z) v /= sum;
}

void accumulate_gradient(const Sample& s, const std::vector<double>& probs,
                         int d, std::vector<double>& grad) {
  const std::size_t row = static_cast<std::size_t>(d) + 1;
  for (std::size_t c = 0; c < probs.size(); ++c) {
    const double coeff = probs[c] - (static_cast<int>(c) == s.label ? 1.0 : 0.0);
    double* gc = grad.data() + c * row;
    for (int j = 0; j < d; ++j) gc[j] += coeff * s.x[static_cast<std::size_t>(j)];
    gc[d] += coeff;
  }
}

}  // namespace

double ToyModel::loss(std::span<const Sample> data) const {
  require(!data.empty(), "loss over an empty set");
  std::vector<double> z;
  double total = 0.0;
  for (const Sample& s : data) {
    logits(s, weights_, z);
    const double zmax = *std::max_element(z.begin(), z.end());
    double sum = 0.0;
    for (double v : z) sum += std::exp(v - zmax);
    total += std::log(sum) + zmax - z[static_cast<std::size_t>(s.label)];
  }
  return total / static_cast<double>(data.size());
}

double ToyModel::accuracy(std::span<const Sample> data) const {
  require(!data.empty(), "accuracy over an empty set");
  int hits = 0;
  for (const Sample& s : data) {
    if (predict(s) == s.label) ++hits;
  }
  return static_cast<double>(hits) / static_cast<double>(data.size());
}

int ToyModel::predict(const Sample& s) const {
  std::vector<double> z;
  logits(s, weights_, z);
  return static_cast<int>(std::max_element(z.begin(), z.end()) - z.begin());
}

std::vector<double> ToyModel::gradient(std::span<const Sample> data) const {
  require(!data.empty(), "gradient over an empty batch");
  std::vector<double> grad(weights_.size(), 0.0);
  std::vector<double> z;
  for (const Sample& s : data) {
    logits(s, weights_, z);
    softmax_inplace(z);
    accumulate_gradient(s, z, d_, grad);
  }
  for (double& g : grad) g /= static_cast<double>(data.size());
  return grad;
}

std::vector<double> ToyModel::local_step(std::span<const Sample> shard,
                                         const ToyConfig& cfg, Rng& rng) const {
  require(!shard.empty(), "local step on an empty shard");
  std::vector<double> w(weights_.begin(), weights_.end());
  std::vector<std::size_t> idx(shard.size());
  for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;

  std::vector<double> z;
  std::vector<double> grad(w.size());
  for (int epoch = 0; epoch < cfg.local_epochs; ++epoch) {
    rng.shuffle(idx);
    for (std::size_t start = 0; start < idx.size();
         start += static_cast<std::size_t>(cfg.batch_size)) {
      const std::size_t stop =
          std::min(idx.size(), start + static_cast<std::size_t>(cfg.batch_size));
      std::fill(grad.begin(), grad.end(), 0.0);
      for (std::size_t i = start; i < stop; ++i) {
        const Sample& s = shard[idx[i]];
        logits(s, w, z);
        softmax_inplace(z);
        accumulate_gradient(s, z, d_, grad);
      }
      const double scale = cfg.learning_rate / static_cast<double>(stop - start);
      for (std::size_t i = 0; i < w.size(); ++i) w[i] -= scale * grad[i];
    }
  }
  for (std::size_t i = 0; i < w.size(); ++i) w[i] -= weights_[i];
  return w;
}

}  // namespace fedsel
