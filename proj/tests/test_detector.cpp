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

#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>

#include "covert_irs/detector.hpp"
#include "covert_irs/errors.hpp"
#include "covert_irs/oracles.hpp"
#include "test_support.hpp"

namespace covert_irs {
namespace {

using testing::rel_err;

struct Draw {
  NoiseUncertaintyModel model;
  double lambda;
};

Draw random_draw(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const double sigma2 = std::pow(10.0, -12.0 + 9.0 * u(rng));
  const double rho = 1.05 + 9.0 * u(rng);
  const double lambda = sigma2 * std::pow(10.0, -2.0 + 4.0 * u(rng));
  return {NoiseUncertaintyModel{sigma2, rho}, lambda};
}

TEST(Pfa, SupportEdgesAndMedian) {
  const NoiseUncertaintyModel m{1.0, 5.0};
  EXPECT_EQ(pfa(m, 0.1), 1.0);
  EXPECT_EQ(pfa(m, 0.2), 1.0);
  EXPECT_EQ(pfa(m, 5.0), 0.0);
  EXPECT_EQ(pfa(m, 50.0), 0.0);
  EXPECT_NEAR(pfa(m, 1.0), 0.5, 1e-15);
}

TEST(PmdActual, Examples) {
  const NoiseUncertaintyModel m{1.0, 5.0};
  EXPECT_EQ(pmd_actual(m, 1.0, 1.0), 0.0);
  EXPECT_EQ(pmd_actual(m, 1.0, 2.0), 0.0);
  EXPECT_NEAR(pmd_actual(m, 2.5, 0.5), std::log(10.0) / (2.0 * std::log(5.0)), 1e-15);
  EXPECT_NEAR(pmd_actual(m, 2.5, 0.5), 0.71533827903669653, 1e-15);
  EXPECT_EQ(pmd_actual(m, 100.0, 1.0), 1.0);
  EXPECT_EQ(pmd_actual(m, 1.0, 0.0), logu_cdf(m, 1.0));
}

TEST(ExpectedPmd, BelowSupportIsZero) {
  const NoiseUncertaintyModel m{1.0, 2.0};
  EXPECT_EQ(expected_pmd_apriori(m, 1.0, 0.5), 0.0);
  EXPECT_EQ(expected_pmd_apriori(m, 1.0, m.lower()), 0.0);
}

TEST(ExpectedPmd, HugeSignalVanishes) {
  const NoiseUncertaintyModel m{1.0, 2.0};
  EXPECT_LE(expected_pmd_apriori(m, 1e12, 1.5), 1e-6);
  EXPECT_GE(expected_pmd_apriori(m, 1e12, 1.5), 0.0);
}

TEST(ExpectedPmd, NoSignalIsNoiseCdf) {
  const NoiseUncertaintyModel m{1.0, 2.0};
  EXPECT_NEAR(expected_pmd_apriori(m, 1e-14, 1.5), logu_cdf(m, 1.5), 1e-10);
  EXPECT_NEAR(expected_pmd_apriori(m, 1e-14, 3.0), 1.0, 1e-12);
}

TEST(ExpectedPmd, ReferenceValue) {
  const NoiseUncertaintyModel m{1.0, 2.0};
  const double got = expected_pmd_apriori(m, 1.0, 1.5);
  // Reference from a 50-digit evaluation of the defining integral.
  EXPECT_LE(rel_err(got, 0.33423355877211840), 1e-12);
  EXPECT_LE(rel_err(got, oracle::expected_pmd_quadrature(1.0, 2.0, 1.0, 1.5)), 1e-10);
}

TEST(ExpectedPmd, MatchesQuadratureOnRandomDraws) {
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 200; ++i) {
    const Draw d = random_draw(rng);
    const double tau = d.model.lower() * std::pow(d.model.rho * d.model.rho * 1.5, u(rng));
    const double got = expected_pmd_apriori(d.model, d.lambda, tau);
    const double want =
        oracle::expected_pmd_quadrature(d.model.sigma2_n, d.model.rho, d.lambda, tau);
    EXPECT_LE(std::abs(got - want), 1e-8 * std::max(1.0, want))
        << "sigma2=" << d.model.sigma2_n << " rho=" << d.model.rho << " lambda=" << d.lambda
        << " tau=" << tau;
  }
}

TEST(ExpectedPmd, DegenerateNoiseIsExponentialCdf) {
  const NoiseUncertaintyModel m{1.0, 1.0};
  EXPECT_EQ(expected_pmd_apriori(m, 2.0, 0.5), 0.0);
  EXPECT_NEAR(expected_pmd_apriori(m, 2.0, 3.0), 1.0 - std::exp(-1.0), 1e-15);
}

TEST(TotalError, OneOutsideSupport) {
  const NoiseUncertaintyModel m{1e-9, 5.0};
  EXPECT_EQ(expected_total_error(m, 1e-8, m.lower() * 0.5), 1.0);
  EXPECT_NEAR(expected_total_error(m, 1e-8, 1e3), 1.0, 1e-12);
}

TEST(TotalError, PfaPlusPmdAtZeroLeakIsOne) {
  const NoiseUncertaintyModel m{2.0, 3.0};
  for (const double tau : testing::log_space(0.1, 20.0, 50)) {
    EXPECT_NEAR(pfa(m, tau) + pmd_actual(m, tau, 0.0), 1.0, 1e-15);
  }
}

TEST(Threshold, RegressionValues) {
  const NoiseUncertaintyModel m{1e-9, 5.0};
  const ThresholdSolution s = optimal_threshold_solution(m, 1e-8);
  EXPECT_LE(rel_err(s.tau, 4.3559417166724885e-9), 1e-9);
  EXPECT_EQ(s.path, ThresholdPath::kReference);
  EXPECT_LE(rel_err(max_covert_leakage(m, 1e-8, 0.99), 1.3797974318398574e-10), 1e-8);
}

TEST(Threshold, LeakageBudgetAgreesWithBisection) {
  const NoiseUncertaintyModel m{1e-9, 5.0};
  const double tau = optimal_threshold(m, 1e-8);
  // Largest s with PFA + PMD(s) >= ξ, located by bisection on the verdict.
  double lo = 0.0;
  double hi = tau;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    (covertness_at(m, tau, mid, 0.99).outcome.error_sum >= 0.99 ? lo : hi) = mid;
  }
  EXPECT_LE(rel_err(max_covert_leakage_at(m, tau, 0.99), lo), 1e-9);
}

TEST(Threshold, BeatsDenseGrid) {
  std::mt19937_64 rng(33);
  for (int i = 0; i < 100; ++i) {
    const Draw d = random_draw(rng);
    const ThresholdSolution s = optimal_threshold_solution(d.model, d.lambda);
    const auto f = [&](double tau) { return expected_total_error(d.model, d.lambda, tau); };
    const oracle::GridMinimum g =
        oracle::log_grid_minimum(f, d.model.lower(), d.model.upper() + 20.0 * d.lambda, 10'000);
    EXPECT_LE(s.total_error, g.value + 1e-12);
    EXPECT_NEAR(s.total_error, f(s.tau), 1e-15);
    EXPECT_GE(s.tau, d.model.lower());
  }
}

TEST(Threshold, ScaleEquivariance) {
  std::mt19937_64 rng(44);
  for (int i = 0; i < 30; ++i) {
    const Draw d = random_draw(rng);
    const double c = 1e3;
    const NoiseUncertaintyModel scaled{d.model.sigma2_n * c, d.model.rho};
    const double a = optimal_threshold(d.model, d.lambda);
    const double b = optimal_threshold(scaled, d.lambda * c);
    EXPECT_LE(rel_err(b, a * c), 1e-6);
  }
}

TEST(Threshold, ClosedFormCandidateIsReported) {
  const NoiseUncertaintyModel m{1e-9, 5.0};
  const ThresholdSolution s = optimal_threshold_solution(m, 1e-8, true);
  if (s.path == ThresholdPath::kClosedForm) {
    EXPECT_LE(s.closed_form_gap, kClosedFormAcceptance);
  } else if (!std::isnan(s.closed_form_gap)) {
    EXPECT_GT(s.closed_form_gap, kClosedFormAcceptance);
  }
}

TEST(Threshold, RejectsDegenerateNoise) {
  EXPECT_THROW(optimal_threshold(NoiseUncertaintyModel{1e-9, 1.0}, 1e-8), ModelError);
}

TEST(Threshold, RejectsBadLambda) {
  const NoiseUncertaintyModel m{1e-9, 5.0};
  EXPECT_THROW(optimal_threshold(m, 0.0), std::invalid_argument);
  EXPECT_THROW(optimal_threshold(m, std::numeric_limits<double>::infinity()),
               std::invalid_argument);
}

TEST(Covertness, Examples) {
  const NoiseUncertaintyModel m{1.0, 5.0};
  // No leakage: PFA + PMD = 1 meets any ξ.
  EXPECT_TRUE(covertness_at(m, 1.0, 0.0, 0.99).feasible);
  // Leakage above the threshold: PMD = 0, only PFA(1) = 0.5 remains.
  const CovertnessVerdict v = covertness_at(m, 1.0, 2.0, 0.99);
  EXPECT_FALSE(v.feasible);
  EXPECT_NEAR(v.outcome.error_sum, 0.5, 1e-15);
  EXPECT_TRUE(covertness_at(m, 1.0, 2.0, 0.5).feasible);
}

TEST(Covertness, LeakageBudgetIsTight) {
  std::mt19937_64 rng(55);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  int finite = 0;
  for (int i = 0; i < 100; ++i) {
    const Draw d = random_draw(rng);
    const double xi = 0.5 + 0.5 * u(rng);
    const double tau = optimal_threshold(d.model, d.lambda);
    const double s = max_covert_leakage_at(d.model, tau, xi);
    if (!std::isfinite(s)) {
      EXPECT_GE(pfa(d.model, tau), xi);
      continue;
    }
    ++finite;
    EXPECT_TRUE(covertness_at(d.model, tau, s, xi).feasible);
    if (s < tau) {
      const double over = s + 1e-6 * tau;
      EXPECT_FALSE(covertness_at(d.model, tau, over, xi).feasible)
          << "xi=" << xi << " s=" << s << " tau=" << tau;
    }
  }
  EXPECT_GT(finite, 50);
}

TEST(Covertness, FullErrorTargetAllowsOnlyFloorLeakage) {
  const NoiseUncertaintyModel m{1.0, 5.0};
  const double tau = 1.0;
  const double s = max_covert_leakage_at(m, tau, 1.0);
  // PMD must equal 1 - PFA = F(τ), so nothing may leak.
  EXPECT_NEAR(s, 0.0, 1e-15);
  EXPECT_TRUE(covertness_at(m, tau, s, 1.0).feasible);
}

TEST(DetectorProperty, Monotonicity) {
  std::mt19937_64 rng(66);
  for (int i = 0; i < 50; ++i) {
    const Draw d = random_draw(rng);
    const auto taus = testing::log_space(d.model.lower() * 0.5, d.model.upper() * 2.0, 60);
    for (std::size_t k = 1; k < taus.size(); ++k) {
      EXPECT_LE(pfa(d.model, taus[k]), pfa(d.model, taus[k - 1]));
      EXPECT_GE(pmd_actual(d.model, taus[k], d.lambda), pmd_actual(d.model, taus[k - 1], d.lambda));
      EXPECT_GE(expected_pmd_apriori(d.model, d.lambda, taus[k]) + 1e-12,
                expected_pmd_apriori(d.model, d.lambda, taus[k - 1]));
    }
    const double tau = std::sqrt(d.model.lower() * d.model.upper());
    const double weaker = expected_pmd_apriori(d.model, d.lambda, tau);
    const double stronger = expected_pmd_apriori(d.model, d.lambda * 2.0, tau);
    EXPECT_LE(stronger, weaker + 1e-12);
    EXPECT_LE(pmd_actual(d.model, tau, d.lambda * 2.0), pmd_actual(d.model, tau, d.lambda));
  }
}

TEST(DetectorProperty, WardenErrorGrowsWithUncertainty) {
  const double sigma2 = 1e-9;
  const double lambda = 1e-8;
  double prev = 0.0;
  for (const double rho : {1.1, 1.5, 2.0, 3.0, 5.0, 8.0, 12.0}) {
    const double err = optimal_threshold_solution(NoiseUncertaintyModel{sigma2, rho}, lambda)
                           .total_error;
    EXPECT_GE(err, prev - 1e-9) << "rho=" << rho;
    prev = err;
  }
}

}  // namespace
}  // namespace covert_irs
