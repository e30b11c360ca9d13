// Copyright 2026 The CTSR Authors.
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

#ifndef CTSR_STATS_HPP_
#define CTSR_STATS_HPP_

#include <span>

namespace ctsr::stats {

// I_x(a, b), evaluated with a Lentz continued fraction.
double RegularizedIncompleteBeta(double a, double b, double x);

// P(T <= t) for Student's t with `df` (possibly fractional) degrees of
// freedom.
double StudentTCdf(double t, double df);

struct WelchResult {
  double t = 0.0;
  double df = 0.0;
  double p_value = 1.0;  // two-sided
  bool significant = false;
};

// Two-sample unequal-variance t-test of mean(a) - mean(b). Each sample needs
// at least two values. Swapping the samples negates t and keeps p.
WelchResult WelchTTest(std::span<const double> a, std::span<const double> b,
                       double alpha = 0.05);

}  // namespace ctsr::stats

#endif  // CTSR_STATS_HPP_
