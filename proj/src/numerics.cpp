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

#include "fedsel/numerics.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace fedsel {

double normal_pdf(double x) {
  return std::exp(-0.5 * x * x) / std::sqrt(2.0 * std::numbers::pi);
}

double normal_cdf(double x) {
  return 0.5 * std::erfc(-x / std::numbers::sqrt2);
}

double integrate_simpson(const std::function<double(double)>& f, double a,
                         double b, int panels) {
  if (panels % 2 != 0) ++panels;
  const double h = (b - a) / panels;
  double sum = f(a) + f(b);
  for (int i = 1; i < panels; ++i) {
    sum += f(a + h * i) * (i % 2 == 1 ? 4.0 : 2.0);
  }
  return sum * h / 3.0;
}

double truncated_normal_mean(double mean, double stddev, double lo) {
  if (stddev == 0.0) {
    if (mean < lo) throw std::invalid_argument("degenerate mass below the floor");
    return mean;
  }
  const double a = (lo - mean) / stddev;
  const double z = 1.0 - normal_cdf(a);
  return mean + stddev * normal_pdf(a) / z;
}

double truncated_normal_expectation(const std::function<double(double)>& g,
                                    double mean, double stddev, double lo) {
  if (stddev == 0.0) {
    if (mean < lo) throw std::invalid_argument("degenerate mass below the floor");
    return g(mean);
  }
  const double a = (lo - mean) / stddev;
  const double z = 1.0 - normal_cdf(a);
  const double hi = mean + 12.0 * stddev;
  auto integrand = [&](double x) {
    return g(x) * normal_pdf((x - mean) / stddev) / (stddev * z);
  };
  return integrate_simpson(integrand, lo, hi, 8192);
}

}  // namespace fedsel
