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

// Slow reference computations used by the test suites and by
// `covert-irs validate`. Nothing here calls into the code paths it checks:
// Ei and the a-priori mis-detection probability come from adaptive
// quadrature in extended precision, Lambert W from bisection, the threshold
// from dense grids and phase solutions from exhaustive enumeration.

#ifndef COVERT_IRS_ORACLES_HPP
#define COVERT_IRS_ORACLES_HPP

#include <boost/math/constants/constants.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <limits>
#include <numbers>
#include <vector>

namespace covert_irs::oracle {

/// Ei(x) for x > 0 by Gauss–Kronrod quadrature in long double:
///   x ≤ 1: γ + ln x + ∫_0^x (e^t - 1)/t dt
///   x > 1: Ei(1) + e^x ∫_0^{x-1} e^{-s}/(x - s) ds
inline long double ei_quadrature(long double x) {
  using boost::math::quadrature::gauss_kronrod;
  const long double gamma = boost::math::constants::euler<long double>();
  const auto near_zero = [](long double t) -> long double {
    if (t == 0.0L) return 1.0L;
    return std::expm1(t) / t;
  };
  const long double tol = 1e-16L;
  if (x <= 1.0L) {
    const long double integral = gauss_kronrod<long double, 31>::integrate(near_zero, 0.0L, x, 2, tol);
    return gamma + std::log(x) + integral;
  }
  const long double ei_one =
      gamma + gauss_kronrod<long double, 31>::integrate(near_zero, 0.0L, 1.0L, 2, tol);
  const auto tail = [x](long double s) -> long double { return std::exp(-s) / (x - s); };
  // The integrand decays like e^{-s}; beyond s = 60 it is below 1e-26 of the
  // peak and the remainder is bounded by e^{-60}/(x - 60).
  const long double upper = x - 1.0L;
  long double integral = 0.0L;
  long double lo = 0.0L;
  for (const long double edge : {1.0L, 4.0L, 16.0L, 64.0L}) {
    const long double hi = std::min(edge, upper);
    if (hi > lo) integral += gauss_kronrod<long double, 31>::integrate(tail, lo, hi, 10, tol);
    lo = hi;
  }
  if (upper > lo) integral += gauss_kronrod<long double, 31>::integrate(tail, lo, upper, 10, tol);
  return ei_one + std::exp(x) * integral;
}

/// Root of w·e^w = z by bisection on [lo, hi] (f must change sign).
inline double lambert_bisection(double z, double lo, double hi) {
  const auto f = [z](long double w) { return w * std::exp(w) - static_cast<long double>(z); };
  long double a = lo;
  long double b = hi;
  long double fa = f(a);
  for (int it = 0; it < 400; ++it) {
    const long double mid = 0.5L * (a + b);
    const long double fm = f(mid);
    if ((fm < 0) == (fa < 0)) {
      a = mid;
      fa = fm;
    } else {
      b = mid;
    }
    if (b - a <= 1e-19L * (1.0L + std::abs(mid))) break;
  }
  return static_cast<double>(0.5L * (a + b));
}

/// ∫_a^{min(τ,b)} f(x)·(1 - e^{-(τ-x)/λ}) dx for the log-uniform noise law,
/// integrated over u = ln x so the density becomes the constant 1/(2 ln ρ).
inline double expected_pmd_quadrature(double sigma2_n, double rho, double lambda, double tau) {
  using boost::math::quadrature::gauss_kronrod;
  const long double a = sigma2_n / rho;
  const long double b = sigma2_n * rho;
  if (tau <= a) return 0.0;
  const long double m = std::min<long double>(tau, b);
  const long double norm = 2.0L * std::log(static_cast<long double>(rho));
  const auto integrand = [&](long double u) -> long double {
    const long double x = std::exp(u);
    return -std::expm1(-(static_cast<long double>(tau) - x) / lambda) / norm;
  };
  const long double lo = std::log(a);
  const long double hi = std::log(m);
  // Split so that the boundary layer near u = ln τ (width ~λ/τ) is resolved.
  long double total = 0.0L;
  const int pieces = 16;
  for (int i = 0; i < pieces; ++i) {
    const long double s = lo + (hi - lo) * i / pieces;
    const long double e = lo + (hi - lo) * (i + 1) / pieces;
    total += gauss_kronrod<long double, 31>::integrate(integrand, s, e, 10, 1e-16L);
  }
  return static_cast<double>(total);
}

/// Minimum of `f` over `points` log-spaced samples of [lo, hi].
struct GridMinimum {
  double arg = 0.0;
  double value = std::numeric_limits<double>::infinity();
};

inline GridMinimum log_grid_minimum(const std::function<double(double)>& f, double lo, double hi,
                                    int points) {
  GridMinimum best;
  const double l0 = std::log(lo);
  const double step = (std::log(hi) - l0) / (points - 1);
  for (int i = 0; i < points; ++i) {
    const double x = std::exp(l0 + step * i);
    const double v = f(x);
    if (v < best.value) best = {x, v};
  }
  return best;
}

/// Exhaustive search over `levels`^N quantized phase vectors for the
/// largest |Σ u_n e^{iφ_n} + d_b|² with |Σ v_n e^{iφ_n} + d_w|² ≤ cap.
struct PhaseOracleResult {
  bool feasible = false;
  double bob_power = 0.0;
  double willie_power = std::numeric_limits<double>::infinity();
  double min_willie_power = std::numeric_limits<double>::infinity();
  std::vector<double> phases;
};

inline PhaseOracleResult exhaustive_phase_search(const std::vector<std::complex<double>>& to_bob,
                                                 std::complex<double> direct_bob,
                                                 const std::vector<std::complex<double>>& to_willie,
                                                 std::complex<double> direct_willie, double cap,
                                                 int levels) {
  const std::size_t n = to_bob.size();
  PhaseOracleResult best;
  std::vector<int> idx(n, 0);
  std::vector<std::complex<double>> rot(levels);
  for (int k = 0; k < levels; ++k) {
    rot[k] = std::polar(1.0, 2.0 * std::numbers::pi * k / levels);
  }
  while (true) {
    std::complex<double> ab = direct_bob;
    std::complex<double> aw = direct_willie;
    for (std::size_t i = 0; i < n; ++i) {
      ab += to_bob[i] * rot[idx[i]];
      aw += to_willie[i] * rot[idx[i]];
    }
    const double pw = std::norm(aw);
    const double pb = std::norm(ab);
    best.min_willie_power = std::min(best.min_willie_power, pw);
    if (pw <= cap && pb > best.bob_power) {
      best.feasible = true;
      best.bob_power = pb;
      best.willie_power = pw;
      best.phases.assign(n, 0.0);
      for (std::size_t i = 0; i < n; ++i) best.phases[i] = 2.0 * std::numbers::pi * idx[i] / levels;
    }
    std::size_t pos = 0;
    while (pos < n && ++idx[pos] == levels) idx[pos++] = 0;
    if (pos == n) break;
  }
  return best;
}

}  // namespace covert_irs::oracle

#endif  // COVERT_IRS_ORACLES_HPP
