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

#ifndef COVERT_IRS_CHANNEL_HPP
#define COVERT_IRS_CHANNEL_HPP

#include <cmath>
#include <complex>
#include <cstddef>
#include <numbers>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "covert_irs/specfun.hpp"

namespace covert_irs {

using Complex = std::complex<double>;

struct Point2 {
  double x = 0.0;
  double y = 0.0;

  friend bool operator==(const Point2&, const Point2&) = default;
};

inline double distance(const Point2& p, const Point2& q) {
  return std::hypot(p.x - q.x, p.y - q.y);
}

/// Receiver selector for composite-channel evaluation.
enum class Target { kBob, kWillie };

/// Geometry and link budget of one Alice/Bob/IRS/Willie deployment.
/// Powers are in watts, positions in meters.
struct Scenario {
  Point2 pos_alice{0.0, 0.0};
  Point2 pos_bob{10.0, 0.0};
  Point2 pos_irs{5.0, 0.0};
  Point2 pos_willie{0.0, 15.0};
  int n_units = 25;
  double alpha = 3.0;
  double sigma2_b = 1e-9;
  NoiseUncertaintyModel noise_model{1e-9, 5.0};
  double xi = 0.99;
  double p_max = 1e-3;
  double tx_prob = 0.5;

  /// Throws std::invalid_argument naming the first violated field.
  void validate() const {
    const auto fail = [](const std::string& what) {
      throw std::invalid_argument("Scenario: " + what);
    };
    const Point2* nodes[] = {&pos_alice, &pos_bob, &pos_irs, &pos_willie};
    for (int i = 0; i < 4; ++i) {
      for (int j = i + 1; j < 4; ++j) {
        if (!(distance(*nodes[i], *nodes[j]) > 0.0)) fail("entities must not coincide");
      }
    }
    if (n_units < 0) fail("n_units must be >= 0");
    if (!(alpha > 0.0)) fail("alpha must be positive");
    if (!(sigma2_b > 0.0)) fail("sigma2_b must be positive");
    noise_model.validate();
    if (!(xi >= 0.0 && xi <= 1.0)) fail("xi must lie in [0, 1]");
    if (!(p_max >= 0.0) || !std::isfinite(p_max)) fail("p_max must be >= 0");
    if (!(tx_prob >= 0.0 && tx_prob <= 1.0)) fail("tx_prob must lie in [0, 1]");
  }

  /// Places Bob at (d, 0) and the IRS at (d/2, 0).
  void set_link_distance(double d) {
    pos_bob = {d, 0.0};
    pos_irs = {d / 2.0, 0.0};
  }
};

/// Amplitude gain d^(-alpha/2) of a power-law link with 1 m reference.
inline double pathloss_amplitude(double d, double alpha) {
  if (!(d > 0.0)) throw std::domain_error("pathloss_amplitude: distance must be positive");
  if (!(alpha > 0.0)) throw std::domain_error("pathloss_amplitude: alpha must be positive");
  return std::pow(d, -alpha / 2.0);
}

/// Per-hop amplitude gains derived from geometry.
struct PathGains {
  double ab = 1.0;
  double aw = 1.0;
  double ai = 1.0;
  double ib = 1.0;
  double iw = 1.0;

  static PathGains from(const Scenario& s) {
    return {pathloss_amplitude(distance(s.pos_alice, s.pos_bob), s.alpha),
            pathloss_amplitude(distance(s.pos_alice, s.pos_willie), s.alpha),
            pathloss_amplitude(distance(s.pos_alice, s.pos_irs), s.alpha),
            pathloss_amplitude(distance(s.pos_irs, s.pos_bob), s.alpha),
            pathloss_amplitude(distance(s.pos_irs, s.pos_willie), s.alpha)};
  }
};

/// One block-fading draw. Small-scale coefficients are CN(0, 1); large-scale
/// gains live in `gains`.
struct ChannelRealization {
  Complex h_ab;
  Complex h_aw;
  std::vector<Complex> h_ai;
  std::vector<Complex> h_ib;
  std::vector<Complex> h_iw;
  PathGains gains;

  std::size_t n_units() const { return h_ai.size(); }

  void validate() const {
    if (h_ib.size() != h_ai.size() || h_iw.size() != h_ai.size()) {
      throw std::invalid_argument("ChannelRealization: IRS sequences differ in length");
    }
  }

  /// Same draw with the IRS removed (direct links only).
  ChannelRealization without_irs() const {
    ChannelRealization out;
    out.h_ab = h_ab;
    out.h_aw = h_aw;
    out.gains = gains;
    return out;
  }

  /// Direct-path amplitude towards `target`.
  Complex direct(Target target) const {
    return target == Target::kBob ? h_ab * gains.ab : h_aw * gains.aw;
  }

  /// Cascade coefficient of unit n towards `target` at zero phase shift.
  Complex cascade(std::size_t n, Target target) const {
    const Complex second = target == Target::kBob ? h_ib[n] * gains.ib : h_iw[n] * gains.iw;
    return h_ai[n] * gains.ai * second;
  }

  std::vector<Complex> cascades(Target target) const {
    std::vector<Complex> out(n_units());
    for (std::size_t n = 0; n < out.size(); ++n) out[n] = cascade(n, target);
    return out;
  }
};

/// IRS phase shifts, each kept in [0, 2π).
class IrsConfiguration {
 public:
  IrsConfiguration() = default;
  explicit IrsConfiguration(std::size_t n) : phases_(n, 0.0) {}
  explicit IrsConfiguration(std::vector<double> phases) : phases_(std::move(phases)) {
    for (double& p : phases_) p = canonical_phase(p);
  }

  static double canonical_phase(double phi) {
    constexpr double kTwoPi = 2.0 * std::numbers::pi;
    double r = std::fmod(phi, kTwoPi);
    if (r < 0.0) r += kTwoPi;
    if (r >= kTwoPi) r = 0.0;
    return r;
  }

  std::size_t size() const { return phases_.size(); }
  double operator[](std::size_t n) const { return phases_[n]; }
  void set(std::size_t n, double phi) { phases_[n] = canonical_phase(phi); }
  std::span<const double> phases() const { return phases_; }

  friend bool operator==(const IrsConfiguration&, const IrsConfiguration&) = default;

 private:
  std::vector<double> phases_;
};

/// Draws every small-scale coefficient as CN(0, 1), direct links first, then
/// (h_ai, h_ib, h_iw) per unit.
template <class Rng>
ChannelRealization sample_realization(const Scenario& scenario, Rng& rng) {
  std::normal_distribution<double> normal(0.0, std::sqrt(0.5));
  auto draw = [&]() {
    const double re = normal(rng);
    const double im = normal(rng);
    return Complex(re, im);
  };
  ChannelRealization real;
  real.gains = PathGains::from(scenario);
  real.h_ab = draw();
  real.h_aw = draw();
  const auto n = static_cast<std::size_t>(scenario.n_units);
  real.h_ai.resize(n);
  real.h_ib.resize(n);
  real.h_iw.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    real.h_ai[i] = draw();
    real.h_ib[i] = draw();
    real.h_iw[i] = draw();
  }
  return real;
}

/// Σ_n cascade_n·e^{iφ_n} + direct, the complex amplitude seen by `target`.
inline Complex effective_amplitude(const ChannelRealization& real, const IrsConfiguration& irs,
                                   Target target) {
  if (irs.size() != real.n_units()) {
    throw std::invalid_argument("effective_amplitude: IRS configuration length mismatch");
  }
  Complex sum = real.direct(target);
  for (std::size_t n = 0; n < irs.size(); ++n) {
    sum += real.cascade(n, target) * std::polar(1.0, irs[n]);
  }
  return sum;
}

/// log2(1 + |amplitude|²·p_a / σ²_B), bits/s/Hz.
inline double covert_rate(Complex amplitude_bob, double p_a, double sigma2_b) {
  return std::log2(1.0 + std::norm(amplitude_bob) * p_a / sigma2_b);
}

}  // namespace covert_irs

#endif  // COVERT_IRS_CHANNEL_HPP
