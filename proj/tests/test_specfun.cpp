// Copyright 2026 The covert-irs Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <stdexcept>
#include <vector>

#include "covert_irs/oracles.hpp"
#include "covert_irs/specfun.hpp"
#include "test_support.hpp"

namespace covert_irs {
namespace {

using testing::log_space;
using testing::rel_err;

constexpr double kInvE = 0.36787944117144232159552377016146;

double residual(double z, double w) {
  const long double lw = w;
  return static_cast<double>(std::abs(lw * std::exp(lw) - static_cast<long double>(z)) /
                             std::max(1.0L, std::abs(static_cast<long double>(z))));
}

// Newton iteration on w·e^w - z in long double, for reference values.
double newton_lambert(double z, double w) {
  long double x = w;
  for (int i = 0; i < 100; ++i) {
    const long double ex = std::exp(x);
    const long double step = (x * ex - z) / (ex * (x + 1.0L));
    x -= step;
    if (std::abs(step) < 1e-19L * std::max(1.0L, std::abs(x))) break;
  }
  return static_cast<double>(x);
}

TEST(LambertW0, TrivialPoints) {
  EXPECT_EQ(lambert_w0(0.0), 0.0);
  EXPECT_NEAR(lambert_w0(std::numbers::e), 1.0, 1e-15);
  EXPECT_NEAR(lambert_w0(-kInvE), -1.0, 1e-7);
}

TEST(LambertW0, OmegaConstantMatchesNewton) {
  const double reference = newton_lambert(1.0, 0.5);
  EXPECT_NEAR(reference, 0.5671432904097838, 1e-15);
  EXPECT_NEAR(lambert_w0(1.0), reference, 1e-14);
}

TEST(LambertW0, RejectsBelowBranchPoint) {
  EXPECT_THROW(lambert_w0(-0.3679), std::domain_error);
  EXPECT_THROW(lambert_w0(-1.0), std::domain_error);
  EXPECT_THROW(lambert_w0(std::numeric_limits<double>::quiet_NaN()), std::domain_error);
}

TEST(LambertWm1, BranchPoint) { EXPECT_NEAR(lambert_wm1(-kInvE), -1.0, 1e-7); }

TEST(LambertWm1, MatchesBisection) {
  for (const double z : {-0.1, -0.2}) {
    const double reference = oracle::lambert_bisection(z, -20.0, -1.0);
    EXPECT_NEAR(lambert_wm1(z), reference, 1e-13) << "z = " << z;
  }
  EXPECT_NEAR(lambert_wm1(-0.1), -3.577152063957297, 1e-13);
  EXPECT_NEAR(lambert_wm1(-0.2), -2.542641357773526, 1e-13);
}

TEST(LambertWm1, RejectsOutsideDomain) {
  EXPECT_THROW(lambert_wm1(0.0), std::domain_error);
  EXPECT_THROW(lambert_wm1(0.5), std::domain_error);
  EXPECT_THROW(lambert_wm1(-0.37), std::domain_error);
}

TEST(LambertProperty, ResidualOverLogSpacedArguments) {
  // 10^4 arguments in total across both branches and both half-lines.
  double worst = 0.0;
  for (const double z : log_space(1e-300, 1e300, 4000)) {
    const double w = lambert_w0(z);
    ASSERT_GE(w, -1.0);
    worst = std::max(worst, residual(z, w));
  }
  for (const double t : log_space(1e-300, 0.999999, 3000)) {
    const double z = -kInvE * t;
    const double w0 = lambert_w0(z);
    const double wm1 = lambert_wm1(z);
    ASSERT_GE(w0, -1.0);
    ASSERT_LE(wm1, -1.0);
    worst = std::max({worst, residual(z, w0), residual(z, wm1)});
  }
  EXPECT_LE(worst, 1e-12);
}

TEST(LambertProperty, BranchesAgreeWithBisection) {
  for (const double z : log_space(1e-6, 0.36, 40)) {
    EXPECT_NEAR(lambert_wm1(-z), oracle::lambert_bisection(-z, -800.0, -1.0), 1e-12) << z;
    EXPECT_NEAR(lambert_w0(-z), oracle::lambert_bisection(-z, -1.0, 0.0), 1e-12) << z;
  }
  for (const double z : log_space(1e-3, 1e6, 40)) {
    EXPECT_LE(rel_err(lambert_w0(z), oracle::lambert_bisection(z, 0.0, 20.0)), 1e-13) << z;
  }
}

TEST(ExpintEi, SeriesReferenceAtOne) {
  // γ + Σ 1/(k·k!) summed independently here.
  long double sum = 0.5772156649015328606065120900824024L;
  long double fact = 1.0L;
  for (int k = 1; k < 40; ++k) {
    fact *= k;
    sum += 1.0L / (k * fact);
  }
  EXPECT_LE(rel_err(expint_ei(1.0), static_cast<double>(sum)), 1e-15);
  EXPECT_NEAR(expint_ei(1.0), 1.8951178163559368, 1e-15);
}

TEST(ExpintEi, SmallArgumentExpansion) {
  const double x = 1e-8;
  const double expected = 0.5772156649015329 + std::log(x) + x;
  EXPECT_NEAR(expint_ei(x), expected, 1e-12);
}

TEST(ExpintEi, MatchesQuadratureAtTen) {
  const long double ref = oracle::ei_quadrature(10.0L);
  EXPECT_LE(rel_err(expint_ei(10.0), static_cast<double>(ref)), 1e-14);
  EXPECT_NEAR(expint_ei(10.0), 2492.2289762418778, 1e-9);
}

TEST(ExpintEi, LargeArguments) {
  EXPECT_LE(rel_err(expint_ei(100.0), 2.7155527448538798e41), 1e-14);
  EXPECT_LE(rel_err(expint_ei(700.0), 1.4509787360525609e301), 1e-14);
}

TEST(ExpintEi, DomainAndOverflow) {
  EXPECT_THROW(expint_ei(0.0), std::domain_error);
  EXPECT_THROW(expint_ei(-1.0), std::domain_error);
  EXPECT_THROW(expint_ei(720.0), std::overflow_error);
  EXPECT_NO_THROW(expint_ei(709.0));
}

TEST(ExpintEi, NearRootKeepsRelativeAccuracy) {
  const double root = 0.37250741078136663;
  EXPECT_NEAR(expint_ei(root), 0.0, 1e-16);
  for (const double dx : {1e-3, 1e-6, 1e-9}) {
    const double x = root + dx;
    const long double ref = oracle::ei_quadrature(x);
    EXPECT_LE(rel_err(expint_ei(x), static_cast<double>(ref)), 1e-8) << dx;
  }
}

TEST(ExpintEiProperty, AgreesWithQuadratureOnGrid) {
  double worst = 0.0;
  for (const double x : log_space(1e-12, 700.0, 600)) {
    const long double ref = oracle::ei_quadrature(x);
    const double scale = static_cast<double>(std::max(std::abs(ref), 1e-3L));
    worst = std::max(worst, static_cast<double>(std::abs(expint_ei(x) - ref)) / scale);
  }
  EXPECT_LE(worst, 1e-10);
}

TEST(ExpintEiProperty, StrictlyIncreasing) {
  double prev = -std::numeric_limits<double>::infinity();
  for (const double x : log_space(1e-12, 700.0, 5000)) {
    const double v = expint_ei(x);
    ASSERT_GT(v, prev) << "x = " << x;
    prev = v;
  }
}

TEST(ExpintEiProperty, DerivativeIsExpOverX) {
  for (const double x : log_space(0.1, 20.0, 60)) {
    const double h = 1e-5 * x;
    const double fd = (expint_ei(x + h) - expint_ei(x - h)) / (2.0 * h);
    EXPECT_LE(rel_err(fd, std::exp(x) / x), 1e-6) << "x = " << x;
  }
}

TEST(ExpintEiScaled, ConsistentWithUnscaled) {
  for (const double x : log_space(1e-6, 700.0, 200)) {
    const double want = std::exp(-x) * static_cast<double>(oracle::ei_quadrature(x));
    EXPECT_LE(std::abs(expint_ei_scaled(x) - want), 1e-12 * std::max(1.0, std::abs(want))) << x;
  }
  // Beyond overflow the scaled form follows 1/x + 1/x² + 2/x³.
  const double x = 1e5;
  EXPECT_LE(rel_err(expint_ei_scaled(x), 1.0 / x + 1.0 / (x * x) + 2.0 / (x * x * x)), 1e-14);
}

TEST(NoiseModel, Validation) {
  EXPECT_THROW(NoiseUncertaintyModel(0.0, 2.0), std::invalid_argument);
  EXPECT_THROW(NoiseUncertaintyModel(-1e-9, 2.0), std::invalid_argument);
  EXPECT_THROW(NoiseUncertaintyModel(1e-9, 0.5), std::invalid_argument);
  const NoiseUncertaintyModel m(1e-9, 5.0);
  EXPECT_DOUBLE_EQ(m.lower(), 2e-10);
  EXPECT_DOUBLE_EQ(m.upper(), 5e-9);
  EXPECT_LE(m.lower(), m.upper());
}

TEST(NoiseModel, DensityIntegratesToOne) {
  using boost::math::quadrature::gauss_kronrod;
  for (const double rho : {1.1, 2.0, 5.0, 10.0}) {
    const NoiseUncertaintyModel m(1e-9, rho);
    // Integrate over u = ln x: f(x)·x du.
    const auto integrand = [&](double u) {
      const double x = std::exp(u);
      return m.pdf(x) * x;
    };
    const double lo = std::log(m.lower());
    const double hi = std::log(m.upper());
    const double total = gauss_kronrod<double, 31>::integrate(integrand, lo, hi, 5, 1e-14);
    EXPECT_NEAR(total, 1.0, 1e-10) << "rho = " << rho;
  }
}

TEST(LogUniformCdf, EdgesAndMedian) {
  const NoiseUncertaintyModel m(1e-9, 5.0);
  EXPECT_EQ(logu_cdf(m, m.lower()), 0.0);
  EXPECT_EQ(logu_cdf(m, m.lower() / 2.0), 0.0);
  EXPECT_NEAR(logu_cdf(m, 1e-9), 0.5, 1e-15);
  EXPECT_EQ(logu_cdf(m, m.upper()), 1.0);
  EXPECT_EQ(logu_cdf(m, 1.0), 1.0);
}

TEST(LogUniformCdf, InteriorValueMatchesSampling) {
  const NoiseUncertaintyModel m(1e-9, 5.0);
  const double want = std::log(15.0) / (2.0 * std::log(5.0));
  EXPECT_NEAR(logu_cdf(m, 3e-9), want, 1e-15);
  EXPECT_NEAR(want, 0.84130309724299265, 1e-15);
  // 1e6 draws from the density, tested within three binomial sigmas.
  std::mt19937_64 rng(12345);
  const int n = 1'000'000;
  int below = 0;
  for (int i = 0; i < n; ++i) below += logu_sample(m, rng) <= 3e-9 ? 1 : 0;
  const double sigma = std::sqrt(want * (1.0 - want) / n);
  EXPECT_NEAR(static_cast<double>(below) / n, want, 3.0 * sigma);
}

TEST(LogUniformCdf, DegenerateIsStep) {
  const NoiseUncertaintyModel m(1e-9, 1.0);
  EXPECT_EQ(logu_cdf(m, 0.999e-9), 0.0);
  EXPECT_EQ(logu_cdf(m, 1e-9), 1.0);
  EXPECT_EQ(logu_quantile(m, 0.3), 1e-9);
}

TEST(LogUniformCdfProperty, MonotoneAndBounded) {
  for (const double rho : {1.5, 5.0, 30.0}) {
    const NoiseUncertaintyModel m(2e-6, rho);
    double prev = 0.0;
    for (const double x : log_space(m.lower() / 10.0, m.upper() * 10.0, 2000)) {
      const double c = logu_cdf(m, x);
      ASSERT_GE(c, prev);
      ASSERT_GE(c, 0.0);
      ASSERT_LE(c, 1.0);
      prev = c;
    }
  }
}

TEST(LogUniformQuantile, InverseTransform) {
  const NoiseUncertaintyModel m(1e-9, 5.0);
  EXPECT_EQ(logu_quantile(m, 0.5), 1e-9);
  EXPECT_EQ(logu_quantile(m, 0.0), m.lower());
  EXPECT_EQ(logu_quantile(m, 1.0), m.upper());
  for (const double u : {0.01, 0.2, 0.7, 0.99}) {
    EXPECT_NEAR(logu_cdf(m, logu_quantile(m, u)), u, 1e-14);
  }
}

TEST(LogUniformSample, KolmogorovSmirnov) {
  const NoiseUncertaintyModel m(1e-9, 5.0);
  std::mt19937_64 rng(20260101);
  std::vector<double> xs(100'000);
  for (double& x : xs) {
    x = logu_sample(m, rng);
    ASSERT_GE(x, m.lower());
    ASSERT_LE(x, m.upper());
  }
  std::sort(xs.begin(), xs.end());
  double d = 0.0;
  const double n = static_cast<double>(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double c = logu_cdf(m, xs[i]);
    d = std::max({d, std::abs(c - i / n), std::abs(c - (i + 1) / n)});
  }
  EXPECT_LT(d, 0.01);
}

}  // namespace
}  // namespace covert_irs
