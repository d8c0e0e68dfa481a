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

// Real Lambert W (branches 0 and -1), the exponential integral Ei for
// positive arguments, and the log-uniform noise-power distribution used to
// model a warden's noise uncertainty.

#ifndef COVERT_IRS_SPECFUN_HPP
#define COVERT_IRS_SPECFUN_HPP

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>
#include <string>

namespace covert_irs {

namespace detail {

inline constexpr double kE = 2.718281828459045235360287;
inline constexpr double kInvE = 0.367879441171442321595523770161;
inline constexpr double kEulerGamma = 0.577215664901532860606512090082;

// Positive root of Ei, split into a double and its residual.
inline constexpr double kEiRootHi = 0.3725074107813666;
inline constexpr double kEiRootLo = 1.3140183414386028e-17;

// Below this Ei is summed as a power series, above it asymptotically.
inline constexpr double kEiSeriesLimit = 40.0;

// One Halley step for w*e^w = z written as t = w - z*e^{-w}, which stays
// finite for large |w| where w*e^w would overflow.
inline double lambert_halley(double z, double w) {
  const double eps = std::numeric_limits<double>::epsilon();
  for (int it = 0; it < 64; ++it) {
    const double wp1 = w + 1.0;
    if (wp1 == 0.0) break;
    const double emw = std::exp(-w);
    double t;
    if (std::isfinite(emw)) {
      t = w - z * emw;
    } else {
      t = (w * std::exp(w) - z) / std::exp(w);
    }
    const double dw = t / (wp1 - (w + 2.0) * t / (2.0 * wp1));
    if (!std::isfinite(dw)) break;
    w -= dw;
    if (std::abs(dw) <= 4.0 * eps * (1.0 + std::abs(w))) break;
  }
  return w;
}

// Branch-point series in p = ±sqrt(2(ez + 1)).
inline double lambert_branch_seed(double p) {
  return -1.0 + p * (1.0 + p * (-1.0 / 3.0 + p * (11.0 / 72.0)));
}

inline double branch_distance(double z) {
  return std::sqrt(std::max(0.0, 2.0 * std::fma(kE, z, 1.0)));
}

// Σ_{k≥1} x^k / (k·k!)
inline double ei_series_tail(double x) {
  const double eps = std::numeric_limits<double>::epsilon();
  double term = 1.0;
  double sum = 0.0;
  for (int k = 1; k < 500; ++k) {
    term *= x / k;
    const double add = term / k;
    sum += add;
    if (add <= eps * std::abs(sum)) break;
  }
  return sum;
}

// Ei near its root, expanded as ln(x/x0) + Σ (x^k - x0^k)/(k·k!) so the
// leading cancellation happens analytically.
inline double ei_near_root(double x) {
  const double eps = std::numeric_limits<double>::epsilon();
  const double delta = (x - kEiRootHi) - kEiRootLo;
  const double x0 = kEiRootHi;
  double diff = delta;      // x^k - x0^k
  double x0_pow = 1.0;      // x0^(k-1)
  double factorial = 1.0;   // k!
  double sum = 0.0;
  for (int k = 1; k < 200; ++k) {
    if (k > 1) {
      x0_pow *= x0;
      diff = x * diff + x0_pow * delta;
      factorial *= k;
    }
    const double add = diff / (k * factorial);
    sum += add;
    if (std::abs(add) <= eps * std::abs(sum) * 0.25) break;
  }
  return std::log1p(delta / x0) + sum;
}

// (1/x) Σ k!/x^k, truncated at the smallest term. Equals e^{-x} Ei(x).
inline double ei_scaled_asymptotic(double x) {
  const double eps = std::numeric_limits<double>::epsilon();
  double term = 1.0;
  double sum = 1.0;
  for (int k = 1; k < 200; ++k) {
    const double next = term * k / x;
    if (next >= term) break;
    term = next;
    sum += term;
    if (term <= eps * sum) break;
  }
  return sum / x;
}

inline double ei_small(double x) {
  if (std::abs(x - kEiRootHi) < 0.15) return ei_near_root(x);
  return kEulerGamma + std::log(x) + ei_series_tail(x);
}

}  // namespace detail

/// Principal branch W0 of the Lambert W function: the w ≥ -1 solving
/// w·e^w = z. Throws std::domain_error for z < -1/e.
inline double lambert_w0(double z) {
  if (std::isnan(z) || z < -detail::kInvE) {
    throw std::domain_error("lambert_w0: argument below -1/e");
  }
  if (z == 0.0) return 0.0;
  if (std::isinf(z)) return z;
  double w;
  if (z < -0.32) {
    const double p = detail::branch_distance(z);
    if (p == 0.0) return -1.0;
    w = detail::lambert_branch_seed(p);
  } else if (z < 3.0) {
    w = std::log1p(z);
  } else {
    const double l1 = std::log(z);
    const double l2 = std::log(l1);
    w = l1 - l2 + l2 / l1;
  }
  return detail::lambert_halley(z, w);
}

/// Lower real branch W-1 of the Lambert W function: the w ≤ -1 solving
/// w·e^w = z for z in [-1/e, 0). Throws std::domain_error elsewhere.
inline double lambert_wm1(double z) {
  if (std::isnan(z) || z < -detail::kInvE || z >= 0.0) {
    throw std::domain_error("lambert_wm1: argument outside [-1/e, 0)");
  }
  double w;
  if (z < -0.25) {
    const double p = detail::branch_distance(z);
    if (p == 0.0) return -1.0;
    w = detail::lambert_branch_seed(-p);
  } else {
    const double l1 = std::log(-z);
    const double l2 = std::log(-l1);
    w = l1 - l2 + l2 / l1;
  }
  w = detail::lambert_halley(z, w);
  return std::min(w, -1.0);
}

/// Exponential integral Ei(x) = PV ∫_{-∞}^{x} e^t/t dt for x > 0.
///
/// Power series up to x = 40 (with a root-centred expansion around the zero
/// at x ≈ 0.3725), asymptotic series above. Throws std::domain_error for
/// x ≤ 0 and std::overflow_error once e^x/x is not representable.
inline double expint_ei(double x) {
  if (!(x > 0.0)) throw std::domain_error("expint_ei: argument must be positive");
  if (x <= detail::kEiSeriesLimit) return detail::ei_small(x);
  const double scaled = detail::ei_scaled_asymptotic(x) * x;  // Σ k!/x^k
  // e^x/x, split as e^{x/2}·(e^{x/2}/x) so it stays finite past x ≈ 709.
  const double half = std::exp(0.5 * x);
  const double value = half * (half / x) * scaled;
  if (!std::isfinite(value)) throw std::overflow_error("expint_ei: result overflows");
  return value;
}

/// e^{-x}·Ei(x) for x > 0. Finite for all positive x; this is the form the
/// detector uses so that large signal-to-belief ratios never overflow.
inline double expint_ei_scaled(double x) {
  if (!(x > 0.0)) throw std::domain_error("expint_ei_scaled: argument must be positive");
  if (x <= detail::kEiSeriesLimit) return std::exp(-x) * detail::ei_small(x);
  return detail::ei_scaled_asymptotic(x);
}

/// Warden noise power σ²_W, log-uniform on [σ²_n/ρ, σ²_n·ρ] with density
/// 1/(2 ln(ρ) x). ρ = 1 is treated as a point mass at σ²_n.
struct NoiseUncertaintyModel {
  double sigma2_n = 1e-9;  ///< nominal noise power, watts
  double rho = 1.0;        ///< uncertainty parameter, ≥ 1

  NoiseUncertaintyModel() = default;
  NoiseUncertaintyModel(double nominal, double uncertainty)
      : sigma2_n(nominal), rho(uncertainty) {
    validate();
  }

  void validate() const {
    if (!(sigma2_n > 0.0) || !std::isfinite(sigma2_n)) {
      throw std::invalid_argument("NoiseUncertaintyModel: sigma2_n must be positive");
    }
    if (!(rho >= 1.0) || !std::isfinite(rho)) {
      throw std::invalid_argument("NoiseUncertaintyModel: rho must be >= 1");
    }
  }

  double lower() const { return sigma2_n / rho; }
  double upper() const { return sigma2_n * rho; }
  bool degenerate() const { return rho == 1.0; }
  /// 2·ln(ρ), the density normaliser.
  double log_span() const { return 2.0 * std::log(rho); }

  double pdf(double x) const {
    if (degenerate() || x < lower() || x > upper()) return 0.0;
    return 1.0 / (log_span() * x);
  }
};

/// P[σ²_W ≤ x].
inline double logu_cdf(const NoiseUncertaintyModel& model, double x) {
  if (model.degenerate()) return x >= model.sigma2_n ? 1.0 : 0.0;
  if (x <= model.lower()) return 0.0;
  if (x >= model.upper()) return 1.0;
  const double value = std::log(x * model.rho / model.sigma2_n) / model.log_span();
  return std::clamp(value, 0.0, 1.0);
}

/// Inverse CDF: σ²_n·ρ^(2u-1) for u in [0, 1].
inline double logu_quantile(const NoiseUncertaintyModel& model, double u) {
  if (model.degenerate()) return model.sigma2_n;
  if (u <= 0.0) return model.lower();
  if (u >= 1.0) return model.upper();
  if (u == 0.5) return model.sigma2_n;
  return model.sigma2_n * std::pow(model.rho, 2.0 * u - 1.0);
}

template <class Rng>
double logu_sample(const NoiseUncertaintyModel& model, Rng& rng) {
  std::uniform_real_distribution<double> uniform(0.0, 1.0);
  return logu_quantile(model, uniform(rng));
}

}  // namespace covert_irs

#endif  // COVERT_IRS_SPECFUN_HPP
