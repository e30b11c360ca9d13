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

#include "ctsr/stats.hpp"

#include <cmath>
#include <random>
#include <vector>

#include <boost/math/distributions/students_t.hpp>
#include <boost/math/special_functions/beta.hpp>
#include <gtest/gtest.h>

namespace ctsr::stats {
namespace {

TEST(IncompleteBetaTest, MatchesBoost) {
  for (double a : {0.5, 1.0, 2.5, 10.0, 60.0}) {
    for (double b : {0.5, 1.0, 3.0, 25.0}) {
      for (double x : {0.0, 1e-6, 0.1, 0.37, 0.5, 0.8, 0.999, 1.0}) {
        EXPECT_NEAR(RegularizedIncompleteBeta(a, b, x), boost::math::ibeta(a, b, x),
                    1e-12)
            << a << " " << b << " " << x;
      }
    }
  }
}

TEST(StudentTTest, CdfMatchesBoost) {
  for (double df : {1.0, 2.0, 4.5, 30.0, 141.7, 5000.0}) {
    const boost::math::students_t dist(df);
    for (double t : {-40.0, -3.1, -1.0, -0.2, 0.0, 0.7, 2.0, 8.0}) {
      EXPECT_NEAR(StudentTCdf(t, df), boost::math::cdf(dist, t), 1e-12)
          << df << " " << t;
    }
  }
}

// Welch statistic and two-sided p from textbook formulas with Boost's CDF.
WelchResult Reference(const std::vector<double>& a, const std::vector<double>& b) {
  auto moments = [](const std::vector<double>& v) {
    double m = 0.0;
    for (double x : v) m += x;
    m /= double(v.size());
    double s = 0.0;
    for (double x : v) s += (x - m) * (x - m);
    return std::pair{m, s / double(v.size() - 1)};
  };
  const auto [ma, va] = moments(a);
  const auto [mb, vb] = moments(b);
  const double na = double(a.size()), nb = double(b.size());
  const double se2 = va / na + vb / nb;
  WelchResult r;
  r.t = (ma - mb) / std::sqrt(se2);
  r.df = se2 * se2 /
         (va * va / (na * na * (na - 1)) + vb * vb / (nb * nb * (nb - 1)));
  r.p_value = 2.0 * boost::math::cdf(boost::math::complement(
                        boost::math::students_t(r.df), std::abs(r.t)));
  return r;
}

TEST(WelchTest, MatchesReferenceFormulas) {
  std::mt19937_64 rng(1);
  std::normal_distribution<double> g(0.0, 1.0);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<double> a(3 + rng() % 40), b(2 + rng() % 60);
    for (double& x : a) x = g(rng);
    for (double& x : b) x = 0.3 + 2.0 * g(rng);
    const WelchResult got = WelchTTest(a, b);
    const WelchResult want = Reference(a, b);
    EXPECT_NEAR(got.t, want.t, 1e-12 * std::max(1.0, std::abs(want.t)));
    EXPECT_NEAR(got.df, want.df, 1e-9 * want.df);
    EXPECT_NEAR(got.p_value, want.p_value, 1e-12);
    EXPECT_EQ(got.significant, got.p_value < 0.05);
  }
}

TEST(WelchTest, IdenticalSamplesAreNotSignificant) {
  const std::vector<double> a{0.1, 0.5, 0.9, 0.4};
  const WelchResult r = WelchTTest(a, a);
  EXPECT_EQ(r.t, 0.0);
  EXPECT_NEAR(r.p_value, 1.0, 1e-12);
  EXPECT_FALSE(r.significant);
}

TEST(WelchTest, SeparatedNormalsAreSignificant) {
  std::mt19937_64 rng(2);
  std::normal_distribution<double> g(0.0, 1.0);
  std::vector<double> a(100), b(100);
  for (double& x : a) x = g(rng);
  for (double& x : b) x = 5.0 + g(rng);
  const WelchResult r = WelchTTest(a, b);
  EXPECT_TRUE(r.significant);
  EXPECT_LT(r.p_value, 1e-12);
  EXPECT_LT(r.t, 0.0);
}

TEST(WelchTest, SwappingArgumentsNegatesT) {
  const std::vector<double> a{1, 2, 3, 4, 5.5}, b{2, 2.5, 7, 9};
  const WelchResult ab = WelchTTest(a, b), ba = WelchTTest(b, a);
  EXPECT_EQ(ab.t, -ba.t);
  EXPECT_EQ(ab.p_value, ba.p_value);
  EXPECT_EQ(ab.df, ba.df);
}

TEST(WelchTest, DegenerateInputs) {
  EXPECT_THROW(WelchTTest(std::vector<double>{1.0}, std::vector<double>{1.0, 2.0}),
               std::invalid_argument);
  const WelchResult same = WelchTTest(std::vector<double>{1, 1, 1},
                                      std::vector<double>{1, 1});
  EXPECT_EQ(same.p_value, 1.0);
  const WelchResult apart = WelchTTest(std::vector<double>{1, 1, 1},
                                       std::vector<double>{0, 0});
  EXPECT_EQ(apart.p_value, 0.0);
  EXPECT_TRUE(apart.significant);
}

}  // namespace
}  // namespace ctsr::stats
