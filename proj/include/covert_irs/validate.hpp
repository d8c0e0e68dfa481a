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

// Self-check suites behind `covert-irs validate`: each production routine is
// compared with its slow reference from oracles.hpp and the worst observed
// error is reported against the suite tolerance.

#ifndef COVERT_IRS_VALIDATE_HPP
#define COVERT_IRS_VALIDATE_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <random>
#include <string>
#include <vector>

#include "covert_irs/detector.hpp"
#include "covert_irs/optimizer.hpp"
#include "covert_irs/oracles.hpp"
#include "covert_irs/specfun.hpp"

namespace covert_irs {

enum class ValidationLevel { kFast, kFull };

struct ValidationOptions {
  ValidationLevel level = ValidationLevel::kFast;
  /// Ei implementation under test; a harness may substitute a faulty one.
  std::function<double(double)> ei = expint_ei;
};

struct SuiteReport {
  std::string name;
  bool passed = false;
  double worst = 0.0;      ///< worst observed error (suite-specific unit)
  double tolerance = 0.0;  ///< pass threshold on `worst`
  std::string detail;
};

namespace validate_detail {

inline bool full(const ValidationOptions& o) { return o.level == ValidationLevel::kFull; }

inline std::vector<double> log_space(double lo, double hi, int n) {
  std::vector<double> out(static_cast<std::size_t>(n));
  const double l0 = std::log(lo);
  const double step = n > 1 ? (std::log(hi) - l0) / (n - 1) : 0.0;
  for (int i = 0; i < n; ++i) out[i] = std::exp(l0 + step * i);
  out.back() = hi;
  return out;
}

// |w·e^w - z| / max(1, |z|) in extended precision.
inline double lambert_residual(double z, double w) {
  const long double lw = w;
  const long double r = lw * std::exp(lw) - static_cast<long double>(z);
  return static_cast<double>(std::abs(r) / std::max(1.0L, std::abs(static_cast<long double>(z))));
}

}  // namespace validate_detail

/// Defining-equation residual of both real branches over log-spaced
/// arguments: positive z in [1e-300, 1e300] and the negative axis approached
/// from 0 and from -1/e.
inline SuiteReport validate_lambert(const ValidationOptions& opts) {
  using namespace validate_detail;
  const int n = full(opts) ? 2500 : 500;
  SuiteReport rep{"lambert", true, 0.0, 1e-12, ""};
  const auto check = [&](double z, double w, bool principal) {
    const double r = lambert_residual(z, w);
    const bool branch_ok = principal ? w >= -1.0 : w <= -1.0;
    if (!branch_ok) rep.worst = std::numeric_limits<double>::infinity();
    rep.worst = std::max(rep.worst, r);
  };
  for (const double z : log_space(1e-300, 1e300, n)) check(z, lambert_w0(z), true);
  const double inv_e = detail::kInvE;
  for (const double t : log_space(1e-300, 1.0, n)) {
    const double z = -t * inv_e;  // towards 0
    check(z, lambert_w0(z), true);
    check(z, lambert_wm1(z), false);
  }
  for (const double t : log_space(1e-15, 0.5, n)) {
    const double z = -inv_e * (1.0 - t);  // towards the branch point
    check(z, lambert_w0(z), true);
    check(z, lambert_wm1(z), false);
  }
  rep.passed = rep.worst <= rep.tolerance;
  rep.detail = "worst residual / max(1,|z|) over " + std::to_string(5 * n) + " evaluations";
  return rep;
}

/// Relative error of Ei against extended-precision quadrature on
/// [1e-12, 700], plus strict monotonicity along the grid.
inline SuiteReport validate_ei(const ValidationOptions& opts) {
  using namespace validate_detail;
  const int n = full(opts) ? 1000 : 150;
  SuiteReport rep{"ei", true, 0.0, 1e-10, ""};
  double prev = -std::numeric_limits<double>::infinity();
  bool monotone = true;
  // The grid straddles the root near 0.3725, where relative error is
  // measured against max(|Ei|, 1e-3) to stay meaningful.
  for (const double x : log_space(1e-12, 700.0, n)) {
    const double got = opts.ei(x);
    const long double ref = oracle::ei_quadrature(x);
    const double scale = static_cast<double>(std::max(std::abs(ref), 1e-3L));
    rep.worst = std::max(rep.worst, static_cast<double>(std::abs(got - ref)) / scale);
    monotone = monotone && got > prev;
    prev = got;
  }
  rep.passed = rep.worst <= rep.tolerance && monotone;
  rep.detail = "worst relative error over " + std::to_string(n) + " points" +
               (monotone ? "" : "; monotonicity violated");
  return rep;
}

/// Closed-form expected mis-detection probability against quadrature over a
/// grid of (ρ, λ/σ², τ/σ²); also checks PFA + PMD(s = 0) = 1 in the support.
inline SuiteReport validate_expected_pmd(const ValidationOptions& opts) {
  using namespace validate_detail;
  const int k = full(opts) ? 20 : 6;
  SuiteReport rep{"expected_pmd", true, 0.0, 1e-8, ""};
  const double sigma2 = 1e-9;
  bool unit_sum = true;
  for (const double rho : log_space(1.1, 10.0, k)) {
    const NoiseUncertaintyModel model(sigma2, rho);
    for (const double lr : log_space(0.01, 100.0, k)) {
      const double lambda = lr * sigma2;
      for (const double tr : log_space(0.1 / rho, 10.0 * rho, k)) {
        const double tau = tr * sigma2;
        const double got = expected_pmd_apriori(model, lambda, tau);
        const double ref = oracle::expected_pmd_quadrature(sigma2, rho, lambda, tau);
        rep.worst = std::max(rep.worst, std::abs(got - ref));
        if (tau > model.lower() && tau < model.upper()) {
          unit_sum = unit_sum && pfa(model, tau) + pmd_actual(model, tau, 0.0) == 1.0;
        }
      }
    }
  }
  rep.passed = rep.worst <= rep.tolerance && unit_sum;
  rep.detail = "worst absolute error over " + std::to_string(k * k * k) + " points" +
               (unit_sum ? "" : "; PFA + PMD(0) != 1 inside support");
  return rep;
}

/// τ* against a 10^4-point log-grid minimum for random (ρ, λ).
inline SuiteReport validate_threshold(const ValidationOptions& opts) {
  const int draws = validate_detail::full(opts) ? 200 : 25;
  SuiteReport rep{"threshold", true, 0.0, 1e-9, ""};
  std::mt19937_64 rng(mix_seed(0x7A0ULL));
  std::uniform_real_distribution<double> log_rho(std::log(1.1), std::log(10.0));
  std::uniform_real_distribution<double> log_ratio(std::log(1e-2), std::log(1e2));
  int rejected = 0;
  double worst_gap = 0.0;
  for (int i = 0; i < draws; ++i) {
    const double sigma2 = 1e-9;
    const NoiseUncertaintyModel model(sigma2, std::exp(log_rho(rng)));
    const double lambda = sigma2 * std::exp(log_ratio(rng));
    const ThresholdSolution sol = optimal_threshold_solution(model, lambda);
    const auto f = [&](double t) { return expected_total_error(model, lambda, t); };
    const auto grid = oracle::log_grid_minimum(f, model.lower() * 1e-2,
                                               model.upper() + 50.0 * lambda, 10000);
    rep.worst = std::max(rep.worst, sol.total_error - grid.value);
    if (sol.path == ThresholdPath::kReference && std::isfinite(sol.closed_form_gap) &&
        sol.closed_form_gap > kClosedFormAcceptance) {
      ++rejected;
      worst_gap = std::max(worst_gap, sol.closed_form_gap);
    }
  }
  rep.passed = rep.worst <= rep.tolerance;
  rep.detail = "worst excess over grid minimum over " + std::to_string(draws) + " draws; " +
               std::to_string(rejected) + " closed-form candidates rejected (largest gap " +
               std::to_string(worst_gap) + ")";
  return rep;
}

/// Result of the N = 2 exhaustive-search comparison.
struct PhaseOracleSummary {
  int draws = 0;
  int within = 0;  ///< feasible and ≥ 99% of the oracle Bob power
  double worst_ratio = std::numeric_limits<double>::infinity();
  /// Solver/oracle Bob power per draw, 0 when the solver found nothing feasible.
  std::vector<double> ratios;

  /// 1 - ratio at the draw ranking just above the worst 1%.
  double percentile_gap() const {
    if (ratios.empty()) return 0.0;
    std::vector<double> sorted = ratios;
    std::sort(sorted.begin(), sorted.end());
    const auto allowed = sorted.size() - (99 * sorted.size() + 99) / 100;
    return 1.0 - sorted[allowed];
  }
};

/// Random two-unit draws with a cap strictly between the smallest reachable
/// and the Bob-aligned leakage, solved by the production solver and by a
/// 64-level exhaustive search.
inline PhaseOracleSummary phase_oracle_comparison(int draws, const SolveOptions& solver = {}) {
  Scenario sc;
  sc.n_units = 2;
  PhaseOracleSummary out;
  out.draws = draws;
  for (int d = 0; d < draws; ++d) {
    std::mt19937_64 rng(mix_seed(2024, static_cast<std::uint64_t>(d)));
    const ChannelRealization real = sample_realization(sc, rng);
    const auto to_bob = real.cascades(Target::kBob);
    const auto to_willie = real.cascades(Target::kWillie);
    const Complex db = real.direct(Target::kBob);
    const Complex dw = real.direct(Target::kWillie);
    const auto unconstrained = oracle::exhaustive_phase_search(
        to_bob, db, to_willie, dw, std::numeric_limits<double>::infinity(), 64);
    const double aligned_w =
        std::norm(effective_amplitude(real, align_phases(real, Target::kBob), Target::kWillie));
    std::uniform_real_distribution<double> frac(0.05, 0.95);
    const double cap = unconstrained.min_willie_power +
                       frac(rng) * (aligned_w - unconstrained.min_willie_power);
    const auto ref = oracle::exhaustive_phase_search(to_bob, db, to_willie, dw, cap, 64);
    const PhaseSolution sol = solve_phases_constrained(real, 1.0, cap, solver);
    double ratio = 0.0;
    if (sol.feasible && ref.feasible && ref.bob_power > 0.0) ratio = sol.bob_gain / ref.bob_power;
    if (sol.feasible && !ref.feasible) ratio = 1.0;  // off-grid feasibility only helps
    out.ratios.push_back(ratio);
    out.worst_ratio = std::min(out.worst_ratio, ratio);
    if (sol.feasible && ratio >= 0.99) ++out.within;
  }
  return out;
}

inline SuiteReport validate_optimizer(const ValidationOptions& /*opts*/) {
  const int draws = 100;  // cheap enough for both levels
  const PhaseOracleSummary s = phase_oracle_comparison(draws);
  SuiteReport rep{"phase_oracle", true, 0.0, 0.01, ""};
  rep.worst = std::max(0.0, s.percentile_gap());
  rep.passed = s.within * 100 >= 99 * draws;
  rep.detail = std::to_string(s.within) + "/" + std::to_string(draws) +
               " draws within 1% of the oracle; worst ratio " + std::to_string(s.worst_ratio);
  return rep;
}

inline std::vector<SuiteReport> run_validation(const ValidationOptions& opts) {
  return {validate_lambert(opts), validate_ei(opts), validate_expected_pmd(opts),
          validate_threshold(opts), validate_optimizer(opts)};
}

}  // namespace covert_irs

#endif  // COVERT_IRS_VALIDATE_HPP
