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

// Warden-side detection: a threshold test on average received power where the
// noise power is log-uniform (bounded uncertainty) and, a priori, the signal
// power is believed exponential with mean λ.

#ifndef COVERT_IRS_DETECTOR_HPP
#define COVERT_IRS_DETECTOR_HPP

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <vector>

#include "covert_irs/errors.hpp"
#include "covert_irs/specfun.hpp"

namespace covert_irs {

struct DetectionOutcome {
  double tau = 0.0;
  double pfa = 0.0;
  double pmd = 0.0;
  double error_sum = 0.0;
};

struct CovertnessVerdict {
  DetectionOutcome outcome;
  bool feasible = false;
};

/// Slack applied when comparing PFA + PMD against ξ.
inline constexpr double kCovertnessSlack = 1e-12;

/// P[σ²_W > τ].
inline double pfa(const NoiseUncertaintyModel& model, double tau) {
  return 1.0 - logu_cdf(model, tau);
}

/// P[s_w + σ²_W < τ] for a known received signal power s_w.
inline double pmd_actual(const NoiseUncertaintyModel& model, double tau, double s_w) {
  if (tau <= s_w) return 0.0;
  return logu_cdf(model, tau - s_w);
}

/// E over σ²_W of P[S < τ - σ²_W] with S exponential of mean λ.
///
/// On the support [a, b] with m = min(τ, b):
///   F(m) - [e^{-(τ-m)/λ}·ẽ(m/λ) - e^{-(τ-a)/λ}·ẽ(a/λ)] / (2 ln ρ)
/// where ẽ(x) = e^{-x}Ei(x).
inline double expected_pmd_apriori(const NoiseUncertaintyModel& model, double lambda,
                                   double tau) {
  if (model.degenerate()) {
    if (tau <= model.sigma2_n) return 0.0;
    return -std::expm1(-(tau - model.sigma2_n) / lambda);
  }
  const double a = model.lower();
  const double b = model.upper();
  if (tau <= a) return 0.0;
  const double m = std::min(tau, b);
  const double head = tau >= b ? 1.0 : logu_cdf(model, tau);
  const double upper_term = std::exp(-(tau - m) / lambda) * expint_ei_scaled(m / lambda);
  const double lower_term = std::exp(-(tau - a) / lambda) * expint_ei_scaled(a / lambda);
  const double value = head - (upper_term - lower_term) / model.log_span();
  return std::clamp(value, 0.0, 1.0);
}

/// PFA(τ) + E[PMD](τ): the warden's a-priori total error.
inline double expected_total_error(const NoiseUncertaintyModel& model, double lambda,
                                   double tau) {
  return pfa(model, tau) + expected_pmd_apriori(model, lambda, tau);
}

enum class ThresholdPath { kReference, kClosedForm };

struct ThresholdSolution {
  double tau = 0.0;
  double total_error = 0.0;
  ThresholdPath path = ThresholdPath::kReference;
  /// Best Lambert-W candidate, NaN when its argument is outside the real
  /// domain.
  double closed_form_tau = std::numeric_limits<double>::quiet_NaN();
  /// |closed_form_tau - reference| / reference, NaN without a candidate.
  double closed_form_gap = std::numeric_limits<double>::quiet_NaN();
};

inline constexpr int kThresholdGridPoints = 512;
inline constexpr double kClosedFormAcceptance = 1e-6;

namespace detail {

template <class F>
double golden_section_minimize(F&& f, double lo, double hi, double rel_tol, int max_iter = 200) {
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = hi - inv_phi * (hi - lo);
  double d = lo + inv_phi * (hi - lo);
  double fc = f(c);
  double fd = f(d);
  for (int it = 0; it < max_iter && (hi - lo) > rel_tol * (std::abs(lo) + std::abs(hi)); ++it) {
    if (fc <= fd) {
      hi = d;
      d = c;
      fd = fc;
      c = hi - inv_phi * (hi - lo);
      fc = f(c);
    } else {
      lo = c;
      c = d;
      fc = fd;
      d = lo + inv_phi * (hi - lo);
      fd = f(d);
    }
  }
  return fc <= fd ? c : d;
}

// Candidate -λ·W(1 / (Ei(a/λ) - Ei(b/λ))) on both real branches, written in
// scaled form so that large b/λ does not overflow.
inline double closed_form_threshold(const NoiseUncertaintyModel& model, double lambda) {
  const double alpha = model.lower() / lambda;
  const double beta = model.upper() / lambda;
  // Ei(β) - Ei(α) = e^β·(ẽ(β) - e^{α-β}·ẽ(α)); the argument is -1 over it.
  const double scaled_gap = expint_ei_scaled(beta) - std::exp(alpha - beta) * expint_ei_scaled(alpha);
  if (!(scaled_gap > 0.0)) return std::numeric_limits<double>::quiet_NaN();
  const double z = -std::exp(-beta) / scaled_gap;
  if (!(z >= -kInvE) || z >= 0.0) return std::numeric_limits<double>::quiet_NaN();
  double best = std::numeric_limits<double>::quiet_NaN();
  double best_err = std::numeric_limits<double>::infinity();
  for (const double w : {lambert_w0(z), lambert_wm1(z)}) {
    const double tau = -w * lambda;
    if (!(tau > 0.0) || !std::isfinite(tau)) continue;
    const double err = expected_total_error(model, lambda, tau);
    if (err < best_err) {
      best_err = err;
      best = tau;
    }
  }
  return best;
}

}  // namespace detail

/// Threshold minimizing the a-priori total error.
///
/// Reference path: a 512-point log grid on [a, b + 20λ] followed by
/// golden-section refinement inside the bracketing grid cell pair. The
/// Lambert-W closed form is also evaluated and used only when it lands within
/// 1e-6 relative of the reference; otherwise the reference stands and the gap
/// is reported. Throws ModelError for ρ = 1 and std::invalid_argument for
/// λ ≤ 0.
inline ThresholdSolution optimal_threshold_solution(const NoiseUncertaintyModel& model,
                                                    double lambda, bool try_closed_form = true) {
  model.validate();
  if (model.degenerate()) {
    throw ModelError("optimal_threshold: rho = 1 leaves the threshold ill-posed");
  }
  if (!(lambda > 0.0) || !std::isfinite(lambda)) {
    throw std::invalid_argument("optimal_threshold: lambda must be positive");
  }
  const auto objective = [&](double tau) { return expected_total_error(model, lambda, tau); };
  const double lo = model.lower();
  const double hi = model.upper() + 20.0 * lambda;
  const double log_lo = std::log(lo);
  const double step = (std::log(hi) - log_lo) / (kThresholdGridPoints - 1);
  std::vector<double> grid(kThresholdGridPoints);
  int best = 0;
  double best_val = std::numeric_limits<double>::infinity();
  for (int i = 0; i < kThresholdGridPoints; ++i) {
    grid[i] = i + 1 == kThresholdGridPoints ? hi : std::exp(log_lo + step * i);
    const double v = objective(grid[i]);
    if (v < best_val) {
      best_val = v;
      best = i;
    }
  }
  const double left = grid[std::max(best - 1, 0)];
  const double right = grid[std::min(best + 1, kThresholdGridPoints - 1)];
  ThresholdSolution sol;
  sol.tau = grid[best];
  sol.total_error = best_val;
  const double refined = detail::golden_section_minimize(objective, left, right, 1e-14);
  const double refined_val = objective(refined);
  if (refined_val <= sol.total_error) {
    sol.tau = refined;
    sol.total_error = refined_val;
  }
  if (try_closed_form) {
    const double cf = detail::closed_form_threshold(model, lambda);
    sol.closed_form_tau = cf;
    if (std::isfinite(cf)) {
      sol.closed_form_gap = std::abs(cf - sol.tau) / sol.tau;
      if (sol.closed_form_gap <= kClosedFormAcceptance) {
        const double cf_val = objective(cf);
        if (cf_val <= sol.total_error) {
          sol.tau = cf;
          sol.total_error = cf_val;
          sol.path = ThresholdPath::kClosedForm;
        }
      }
    }
  }
  return sol;
}

inline double optimal_threshold(const NoiseUncertaintyModel& model, double lambda) {
  return optimal_threshold_solution(model, lambda).tau;
}

/// Evaluates PFA + PMD at a fixed threshold against the actual leaked power.
inline CovertnessVerdict covertness_at(const NoiseUncertaintyModel& model, double tau,
                                       double s_w_actual, double xi) {
  CovertnessVerdict v;
  v.outcome.tau = tau;
  v.outcome.pfa = pfa(model, tau);
  v.outcome.pmd = pmd_actual(model, tau, s_w_actual);
  v.outcome.error_sum = v.outcome.pfa + v.outcome.pmd;
  v.feasible = v.outcome.error_sum >= xi - kCovertnessSlack;
  return v;
}

/// The warden thresholds at τ*(λ_apriori); covertness holds when the actual
/// PFA + PMD stays at or above ξ.
inline CovertnessVerdict covertness_check(const NoiseUncertaintyModel& model,
                                          double lambda_apriori, double s_w_actual, double xi) {
  return covertness_at(model, optimal_threshold(model, lambda_apriori), s_w_actual, xi);
}

/// Largest leaked power s with PFA(τ) + PMD(τ, s) ≥ ξ at a fixed threshold.
/// +infinity when false alarms alone meet ξ.
inline double max_covert_leakage_at(const NoiseUncertaintyModel& model, double tau, double xi) {
  const double pf = pfa(model, tau);
  if (pf >= xi) return std::numeric_limits<double>::infinity();
  const double needed = xi - pf;  // PMD that must survive, in (0, 1]
  // F(τ - s) ≥ needed  ⇔  τ - s ≥ a·ρ^(2·needed)
  const double floor_power = model.lower() * std::pow(model.rho, 2.0 * needed);
  return std::max(0.0, tau - floor_power);
}

inline double max_covert_leakage(const NoiseUncertaintyModel& model, double lambda_apriori,
                                 double xi) {
  return max_covert_leakage_at(model, optimal_threshold(model, lambda_apriori), xi);
}

}  // namespace covert_irs

#endif  // COVERT_IRS_DETECTOR_HPP
