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

#ifndef FEDSEL_NUMERICS_HPP_
#define FEDSEL_NUMERICS_HPP_

#include <functional>

namespace fedsel {

double normal_pdf(double x);
double normal_cdf(double x);

/// Composite Simpson over [a, b] with `panels` (even) subintervals.
double integrate_simpson(const std::function<double(double)>& f, double a,
                         double b, int panels = 4096);

/// Mean of a normal(mean, stddev) truncated below at `lo` (closed form).
double truncated_normal_mean(double mean, double stddev, double lo);

/// E[g(X)] for X ~ normal(mean, stddev) truncated below at `lo`, by
/// quadrature over [lo, mean + 12 stddev].
double truncated_normal_expectation(const std::function<double(double)>& g,
                                    double mean, double stddev, double lo);

}  // namespace fedsel

#endif  // FEDSEL_NUMERICS_HPP_
