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

// Joint IRS phase / transmit power configuration.
//
// For a fixed transmit power the covertness constraint reduces to a cap on
// the power leaked to the warden, so the phase problem is
//
//   max |A_B(φ)|²  s.t.  |A_W(φ)|² ≤ s_max / P_A,  |e^{iφ_n}| = 1,
//
// solved by element-wise block coordinate descent (BCD) over a grid of
// candidate angles per element. With the other elements fixed both received
// powers are sinusoids in φ_n, so the feasible set is an arc; `exact_updates`
// adds the unconstrained optimum and the arc endpoints to the grid. Because
// plain BCD stalls on the constraint boundary, a multiplier route (coordinate
// ascent on |A_B|² - μ|A_W|², μ bisected to the cap) seeds one more BCD run.
// The outer problem searches a log-spaced power grid coarse-to-fine and
// polishes the best point with a golden-section step.

#ifndef COVERT_IRS_OPTIMIZER_HPP
#define COVERT_IRS_OPTIMIZER_HPP

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <numbers>
#include <random>
#include <stdexcept>
#include <vector>

#include "covert_irs/channel.hpp"
#include "covert_irs/detector.hpp"

namespace covert_irs {

struct SolveOptions {
  int restarts = 1;          ///< random initialisations per power level
  int bcd_sweeps = 40;       ///< max sweeps per initialisation
  int phase_grid = 16;       ///< grid angles scanned per element update
  int power_grid = 64;       ///< log-spaced power points per decade
  double tolerance = 1e-6;   ///< relative objective tolerance
  std::uint64_t rng_seed = 1;
  /// Also try the exact per-element optimum (arc endpoints) besides the grid.
  bool exact_updates = false;

  void validate() const {
    if (restarts < 1 || bcd_sweeps < 1 || phase_grid < 1 || power_grid < 1) {
      throw std::invalid_argument("SolveOptions: counts must be >= 1");
    }
    if (!(tolerance > 0.0)) throw std::invalid_argument("SolveOptions: tolerance must be positive");
  }

  friend bool operator==(const SolveOptions&, const SolveOptions&) = default;
};

struct SolveResult {
  IrsConfiguration phases;
  double p_a = 0.0;
  double rate = 0.0;  ///< conditional Shannon rate, bits/s/Hz
  DetectionOutcome outcome;
  bool feasible = true;
  /// Whether some phase configuration met the covertness cap at P_A = p_max.
  bool pmax_feasible = false;
  int iterations = 0;
};

/// splitmix64 finaliser; used wherever a seed must be derived from others.
inline std::uint64_t mix_seed(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

inline std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b) {
  return mix_seed(a ^ mix_seed(b + 0x632BE59BD9B4E019ULL));
}

/// φ_n = arg(direct) - arg(cascade_n): every reflected path arrives in phase
/// with the direct path at `target`. Zero-magnitude cascades keep phase 0.
inline IrsConfiguration align_phases(const ChannelRealization& real, Target target) {
  real.validate();
  const Complex direct = real.direct(target);
  IrsConfiguration out(real.n_units());
  for (std::size_t n = 0; n < real.n_units(); ++n) {
    const Complex c = real.cascade(n, target);
    if (c == Complex(0.0, 0.0)) continue;
    out.set(n, std::arg(direct) - std::arg(c));
  }
  return out;
}

/// Outcome of one constrained phase solve. Gains are |A|² (per unit power).
struct PhaseSolution {
  IrsConfiguration phases;
  bool feasible = false;
  double bob_gain = 0.0;
  double willie_gain = 0.0;
  int sweeps = 0;
};

/// Per-sweep record of one BCD run, for diagnostics and tests.
struct SweepTrace {
  std::vector<double> bob_gain;
  std::vector<bool> feasible;
};

/// Cascade/direct coefficients of one realization, prepared for repeated
/// phase solves at different leakage caps.
class PhaseProblem {
 public:
  PhaseProblem(const ChannelRealization& real, const SolveOptions& opts)
      : to_bob_(real.cascades(Target::kBob)),
        to_willie_(real.cascades(Target::kWillie)),
        direct_bob_(real.direct(Target::kBob)),
        direct_willie_(real.direct(Target::kWillie)),
        opts_(opts) {
    real.validate();
    opts.validate();
    const std::size_t n = to_bob_.size();
    grid_.resize(static_cast<std::size_t>(opts.phase_grid));
    for (int k = 0; k < opts.phase_grid; ++k) {
      grid_[k] = 2.0 * std::numbers::pi * k / opts.phase_grid;
    }
    inits_.push_back(align_phases(real, Target::kBob));
    std::mt19937_64 rng(mix_seed(opts.rng_seed, 0xC0FFEEULL));
    std::uniform_real_distribution<double> angle(0.0, 2.0 * std::numbers::pi);
    for (int r = 0; r < opts.restarts; ++r) {
      std::vector<double> phases(n);
      for (double& p : phases) p = angle(rng);
      inits_.emplace_back(std::move(phases));
    }
    const IrsConfiguration& aligned = inits_.front();
    aligned_bob_gain_ = std::norm(amplitude(to_bob_, direct_bob_, aligned));
    aligned_willie_gain_ = std::norm(amplitude(to_willie_, direct_willie_, aligned));
  }

  std::size_t n_units() const { return to_bob_.size(); }
  const IrsConfiguration& aligned() const { return inits_.front(); }
  double aligned_bob_gain() const { return aligned_bob_gain_; }
  double aligned_willie_gain() const { return aligned_willie_gain_; }

  double bob_gain(const IrsConfiguration& irs) const {
    return std::norm(amplitude(to_bob_, direct_bob_, irs));
  }
  double willie_gain(const IrsConfiguration& irs) const {
    return std::norm(amplitude(to_willie_, direct_willie_, irs));
  }

  /// Best phases with |A_W|² ≤ cap over all initialisations. An infinite cap
  /// short-circuits to Bob alignment. `thorough` adds the multiplier route
  /// ahead of the plain BCD runs.
  PhaseSolution solve(double cap, bool thorough = true) const {
    PhaseSolution best;
    best.phases = aligned();
    best.bob_gain = aligned_bob_gain_;
    best.willie_gain = aligned_willie_gain_;
    if (aligned_willie_gain_ <= cap) {
      best.feasible = true;
      return best;
    }
    best.willie_gain = std::numeric_limits<double>::infinity();
    best.bob_gain = 0.0;
    int total_sweeps = 0;
    const auto keep = [&](PhaseSolution cand) {
      total_sweeps += cand.sweeps;
      const bool better =
          (cand.feasible && (!best.feasible || cand.bob_gain > best.bob_gain)) ||
          (!cand.feasible && !best.feasible && cand.willie_gain < best.willie_gain);
      if (better) best = std::move(cand);
    };
    if (thorough) {
      const PhaseSolution lag = lagrangian_solve(cap, inits_.front());
      total_sweeps += lag.sweeps;
      keep(run_bcd(lag.phases, cap, nullptr));
    }
    for (const IrsConfiguration& init : inits_) keep(run_bcd(init, cap, nullptr));
    best.sweeps = total_sweeps;
    return best;
  }

  /// One BCD run from `init`. Optionally records per-sweep objective.
  PhaseSolution run_bcd(const IrsConfiguration& init, double cap, SweepTrace* trace) const {
    const std::size_t n = n_units();
    std::vector<Complex> rot(n);
    for (std::size_t i = 0; i < n; ++i) rot[i] = std::polar(1.0, init[i]);
    IrsConfiguration phases = init;
    Complex ab = direct_bob_;
    Complex aw = direct_willie_;
    for (std::size_t i = 0; i < n; ++i) {
      ab += to_bob_[i] * rot[i];
      aw += to_willie_[i] * rot[i];
    }
    bool was_feasible = std::norm(aw) <= cap;
    double prev_obj = std::norm(ab);
    double prev_leak = std::norm(aw);
    int sweeps = 0;
    for (; sweeps < opts_.bcd_sweeps;) {
      for (std::size_t i = 0; i < n; ++i) {
        const Complex cb = ab - to_bob_[i] * rot[i];
        const Complex cw = aw - to_willie_[i] * rot[i];
        const double phi = update_element(cb, to_bob_[i], cw, to_willie_[i], cap, phases[i]);
        phases.set(i, phi);
        rot[i] = std::polar(1.0, phases[i]);
        ab = cb + to_bob_[i] * rot[i];
        aw = cw + to_willie_[i] * rot[i];
      }
      ++sweeps;
      // Refresh sums to keep incremental rounding from drifting.
      ab = direct_bob_;
      aw = direct_willie_;
      for (std::size_t i = 0; i < n; ++i) {
        ab += to_bob_[i] * rot[i];
        aw += to_willie_[i] * rot[i];
      }
      const double obj = std::norm(ab);
      const bool feasible = std::norm(aw) <= cap;
      if (trace) {
        trace->bob_gain.push_back(obj);
        trace->feasible.push_back(feasible);
      }
      const double leak = std::norm(aw);
      if (feasible && was_feasible && obj - prev_obj <= opts_.tolerance * obj) break;
      // Leakage minimisation has stalled above the cap.
      if (!feasible && !was_feasible && prev_leak - leak <= opts_.tolerance * prev_leak) break;
      was_feasible = feasible;
      prev_obj = obj;
      prev_leak = leak;
    }
    PhaseSolution out;
    out.phases = std::move(phases);
    out.bob_gain = std::norm(ab);
    out.willie_gain = std::norm(aw);
    out.feasible = out.willie_gain <= cap;
    out.sweeps = sweeps;
    return out;
  }

  /// Coordinate ascent on |A_B|² - μ|A_W|² from `phases` (updated in place).
  /// Each element update is closed-form: φ_n = -arg(u_n·conj(c_B) - μ·v_n·conj(c_W)).
  int penalized_ascent(IrsConfiguration& phases, double mu) const {
    const std::size_t n = n_units();
    std::vector<Complex> rot(n);
    Complex ab = direct_bob_;
    Complex aw = direct_willie_;
    for (std::size_t i = 0; i < n; ++i) {
      rot[i] = std::polar(1.0, phases[i]);
      ab += to_bob_[i] * rot[i];
      aw += to_willie_[i] * rot[i];
    }
    double prev = std::norm(ab) - mu * std::norm(aw);
    int sweeps = 0;
    while (sweeps < opts_.bcd_sweeps) {
      for (std::size_t i = 0; i < n; ++i) {
        const Complex cb = ab - to_bob_[i] * rot[i];
        const Complex cw = aw - to_willie_[i] * rot[i];
        const Complex g = to_bob_[i] * std::conj(cb) - mu * to_willie_[i] * std::conj(cw);
        if (g != Complex(0.0, 0.0)) {
          phases.set(i, -std::arg(g));
          rot[i] = std::polar(1.0, phases[i]);
        }
        ab = cb + to_bob_[i] * rot[i];
        aw = cw + to_willie_[i] * rot[i];
      }
      ++sweeps;
      const double cur = std::norm(ab) - mu * std::norm(aw);
      const double scale = std::norm(ab) + mu * std::norm(aw);
      if (std::abs(cur - prev) <= opts_.tolerance * scale) break;
      prev = cur;
    }
    return sweeps;
  }

  /// Lagrangian route: the multiplier μ on leaked power is bracketed by
  /// doubling and bisected (in log μ) so that the penalised maximiser just
  /// meets the cap; the best feasible iterate seen is returned.
  PhaseSolution lagrangian_solve(double cap, const IrsConfiguration& init) const {
    PhaseSolution best;
    best.phases = init;
    best.willie_gain = std::numeric_limits<double>::infinity();
    int sweeps = 0;
    const auto consider = [&](const IrsConfiguration& x) {
      const double w = willie_gain(x);
      const double b = bob_gain(x);
      if (w <= cap) {
        if (!best.feasible || b > best.bob_gain) {
          best.feasible = true;
          best.phases = x;
          best.bob_gain = b;
          best.willie_gain = w;
        }
        return true;
      }
      if (!best.feasible && w < best.willie_gain) {
        best.phases = x;
        best.bob_gain = b;
        best.willie_gain = w;
      }
      return false;
    };
    // Scale μ to the ratio of Bob to Willie cascade energy.
    double bob_energy = std::norm(direct_bob_);
    double willie_energy = std::norm(direct_willie_);
    for (std::size_t i = 0; i < n_units(); ++i) {
      bob_energy += std::norm(to_bob_[i]);
      willie_energy += std::norm(to_willie_[i]);
    }
    const double mu0 = willie_energy > 0.0 ? bob_energy / willie_energy : 1.0;
    IrsConfiguration x = init;
    double mu_lo = 0.0;
    double mu_hi = mu0;
    IrsConfiguration x_hi;
    bool have_hi = false;
    for (int i = 0; i < 64; ++i) {
      sweeps += penalized_ascent(x, mu_hi);
      if (consider(x)) {
        have_hi = true;
        x_hi = x;
        break;
      }
      mu_lo = mu_hi;
      mu_hi *= 4.0;
    }
    if (have_hi) {
      // Walk from the feasible side so the warm start stays near the cap.
      for (int i = 0; i < kMultiplierBisections; ++i) {
        const double mu = mu_lo > 0.0 ? std::sqrt(mu_lo * mu_hi) : 0.5 * mu_hi;
        IrsConfiguration y = x_hi;
        sweeps += penalized_ascent(y, mu);
        if (consider(y)) {
          mu_hi = mu;
          x_hi = std::move(y);
        } else {
          mu_lo = mu;
        }
        if (mu_lo > 0.0 && mu_hi / mu_lo < 1.0 + 1e-3) break;
      }
    }
    best.sweeps = sweeps;
    return best;
  }

  static constexpr int kMultiplierBisections = 16;

 private:
  static Complex amplitude(const std::vector<Complex>& cascade, Complex direct,
                           const IrsConfiguration& irs) {
    Complex sum = direct;
    for (std::size_t n = 0; n < cascade.size(); ++n) sum += cascade[n] * std::polar(1.0, irs[n]);
    return sum;
  }

  // Exact single-element update. Among feasible candidate angles pick the
  // one maximising Bob power; with none feasible pick the one minimising
  // Willie power. The current angle is always a candidate, so a feasible
  // iterate never becomes infeasible and its objective never decreases.
  double update_element(Complex cb, Complex u, Complex cw, Complex v, double cap,
                        double current) const {
    constexpr double kPi = std::numbers::pi;
    const double theta_b = std::arg(cb) - std::arg(u);
    const double theta_w = std::arg(cw) - std::arg(v);
    double candidates[6];
    int count = 0;
    candidates[count++] = current;
    if (opts_.exact_updates) {
      candidates[count++] = theta_b;
      candidates[count++] = theta_w + kPi;
    }
    const double cross = 2.0 * std::abs(cw) * std::abs(v);
    if (opts_.exact_updates && cross > 0.0) {
      const double kappa = (cap - std::norm(cw) - std::norm(v)) / cross;
      if (kappa > -1.0 && kappa < 1.0) {
        // Willie power exceeds the cap inside (θ_w - δ, θ_w + δ).
        const double delta = std::acos(kappa);
        const double margin = 1e-12 * (1.0 + delta);
        candidates[count++] = theta_w + delta + margin;
        candidates[count++] = theta_w - delta - margin;
      }
    }
    double best_phi = current;
    double best_bob = -1.0;
    double best_willie = std::numeric_limits<double>::infinity();
    bool any_feasible = false;
    const auto consider = [&](double phi) {
      const Complex r = std::polar(1.0, phi);
      const double pw = std::norm(cw + v * r);
      const double pb = std::norm(cb + u * r);
      if (pw <= cap) {
        if (!any_feasible || pb > best_bob) {
          any_feasible = true;
          best_bob = pb;
          best_phi = phi;
        }
      } else if (!any_feasible && pw < best_willie) {
        best_willie = pw;
        best_phi = phi;
      }
    };
    for (int k = 0; k < count; ++k) consider(candidates[k]);
    for (const double g : grid_) consider(g);
    return best_phi;
  }

  std::vector<Complex> to_bob_;
  std::vector<Complex> to_willie_;
  Complex direct_bob_;
  Complex direct_willie_;
  SolveOptions opts_;
  std::vector<double> grid_;
  std::vector<IrsConfiguration> inits_;
  double aligned_bob_gain_ = 0.0;
  double aligned_willie_gain_ = 0.0;
};

/// Maximizes Bob's received power p_a·|A_B|² subject to p_a·|A_W|² ≤ s_max.
/// s_max = +inf means the covertness constraint is inactive.
inline PhaseSolution solve_phases_constrained(const ChannelRealization& real, double p_a,
                                              double s_max, const SolveOptions& opts) {
  if (!(p_a > 0.0)) throw std::invalid_argument("solve_phases_constrained: p_a must be positive");
  if (!(s_max >= 0.0)) throw std::invalid_argument("solve_phases_constrained: s_max must be >= 0");
  const PhaseProblem problem(real, opts);
  return problem.solve(s_max / p_a);
}

/// Warden threshold and leakage budget at one transmit power.
struct PowerLevel {
  double p_a = 0.0;
  double tau = 0.0;
  double s_max = 0.0;  ///< +inf when unconstrained
};

/// Warden-side quantities along the power grid of one scenario. They depend
/// on geometry and noise only, so a schedule is shared by every fading draw.
///
/// Below the power P_free at which false alarms alone stop meeting ξ, the
/// covertness constraint is inactive and the rate grows with power, so the
/// search space is [P_free, p_max]. Levels are P_free followed by the grid
/// p_max·10^(-k/power_grid) that lies above it, in ascending order.
class PowerSchedule {
 public:
  PowerSchedule(const Scenario& scenario, const SolveOptions& opts)
      : noise_(scenario.noise_model),
        xi_(scenario.xi),
        aw_power_gain_(std::pow(PathGains::from(scenario).aw, 2)),
        per_decade_(opts.power_grid) {
    scenario.validate();
    opts.validate();
    if (!(scenario.p_max > 0.0)) return;
    const double p_max = scenario.p_max;
    if (!std::isfinite(level(p_max).s_max)) {
      levels_.push_back(level(p_max));
      free_power_ = p_max;
      return;
    }
    free_power_ = find_free_power(p_max);
    std::vector<PowerLevel> desc;
    for (int k = 0;; ++k) {
      const double p = k == 0 ? p_max : p_max * std::pow(10.0, -static_cast<double>(k) / per_decade_);
      if (!(p > free_power_)) break;
      desc.push_back(level(p));
    }
    if (free_power_ > 0.0) levels_.push_back(level(free_power_));
    levels_.insert(levels_.end(), desc.rbegin(), desc.rend());
  }

  /// λ = P_A·d_AW^-α: the warden's mean-signal belief, which ignores the IRS.
  double lambda(double p_a) const { return p_a * aw_power_gain_; }

  PowerLevel level(double p_a) const {
    PowerLevel lv;
    lv.p_a = p_a;
    lv.tau = optimal_threshold(noise_, lambda(p_a));
    lv.s_max = max_covert_leakage_at(noise_, lv.tau, xi_);
    return lv;
  }

  /// Ascending in power; the last entry is p_max.
  const std::vector<PowerLevel>& levels() const { return levels_; }
  /// Largest power with an inactive covertness constraint (0 if none found).
  double free_power() const { return free_power_; }
  int per_decade() const { return per_decade_; }
  const NoiseUncertaintyModel& noise() const { return noise_; }
  double xi() const { return xi_; }

 private:
  // Bisection in log-power on "s_max is unbounded"; PFA at the optimal
  // threshold falls as the warden's signal belief grows.
  double find_free_power(double p_max) const {
    double hi = p_max;
    double lo = p_max;
    for (int i = 0; i < 60; ++i) {
      lo = hi * 1e-3;
      if (!std::isfinite(level(lo).s_max)) break;
      hi = lo;
      if (i + 1 == 60) return 0.0;
    }
    for (int i = 0; i < 60 && hi / lo > 1.0 + 1e-9; ++i) {
      const double mid = std::sqrt(lo * hi);
      if (std::isfinite(level(mid).s_max)) {
        hi = mid;
      } else {
        lo = mid;
      }
    }
    return lo;
  }

  NoiseUncertaintyModel noise_;
  double xi_;
  double aw_power_gain_;
  int per_decade_;
  double free_power_ = 0.0;
  std::vector<PowerLevel> levels_;
};

namespace detail {

struct PowerCandidate {
  PowerLevel level;
  PhaseSolution phases;
  double rate = -1.0;  ///< negative when infeasible
};

inline PowerCandidate evaluate_power(const PhaseProblem& problem, const PowerLevel& lv,
                                     double sigma2_b, bool thorough) {
  PowerCandidate c;
  c.level = lv;
  c.phases = problem.solve(lv.s_max / lv.p_a, thorough);
  if (c.phases.feasible) c.rate = std::log2(1.0 + lv.p_a * c.phases.bob_gain / sigma2_b);
  return c;
}

}  // namespace detail

/// Joint optimisation over P_A ∈ (0, p_max] and the IRS phases, reusing a
/// precomputed power schedule.
///
/// Every `stride`-th grid level (stride = power_grid/4) is solved first; the
/// full-resolution grid is then solved within one coarse step of the best
/// coarse level. Both passes use plain BCD. The best fine level and its
/// neighbours are re-solved with the multiplier route, and a golden-section
/// pass in log-power polishes between the neighbours of the winner. Powers whose phase sub-problem is
/// infeasible are skipped. Ties go to the smaller power.
inline SolveResult solve_joint(const ChannelRealization& real, const Scenario& scenario,
                               const PowerSchedule& schedule, const SolveOptions& opts) {
  const PhaseProblem problem(real, opts);
  SolveResult result;
  result.phases = problem.aligned();
  result.p_a = 0.0;
  result.rate = 0.0;
  result.feasible = true;
  // Silent transmitter: PFA + PMD = 1 at any threshold.
  result.outcome = covertness_at(scenario.noise_model, scenario.noise_model.sigma2_n, 0.0,
                                 scenario.xi).outcome;
  const auto& levels = schedule.levels();
  if (levels.empty()) return result;

  const int count = static_cast<int>(levels.size());
  std::vector<detail::PowerCandidate> solved(levels.size());
  std::vector<bool> done(levels.size(), false);
  int iterations = 0;
  const auto solve_at = [&](int k, bool thorough) -> const detail::PowerCandidate& {
    if (!done[k]) {
      solved[k] = detail::evaluate_power(problem, levels[k], scenario.sigma2_b, thorough);
      iterations += solved[k].phases.sweeps;
      done[k] = true;
    }
    return solved[k];
  };
  const auto improves = [](double rate, double best) {
    return rate > best * (1.0 + 1e-12) + 1e-15;
  };

  const int stride = std::max(1, schedule.per_decade() / 4);
  int best_k = -1;
  double best_rate = 0.0;
  // Coarse pass anchored at p_max, walked in ascending power.
  for (int k = (count - 1) % stride; k < count; k += stride) {
    const auto& c = solve_at(k, false);
    if (c.rate >= 0.0 && improves(c.rate, best_rate)) {
      best_rate = c.rate;
      best_k = k;
    }
  }
  if (best_k >= 0 && stride > 1) {
    const int lo = std::max(0, best_k - stride + 1);
    const int hi = std::min(count - 1, best_k + stride - 1);
    for (int k = lo; k <= hi; ++k) solve_at(k, false);
    // Re-select over everything solved, ascending so ties keep the lower power.
    best_k = -1;
    best_rate = 0.0;
    for (int k = 0; k < count; ++k) {
      if (done[k] && solved[k].rate >= 0.0 && improves(solved[k].rate, best_rate)) {
        best_rate = solved[k].rate;
        best_k = k;
      }
    }
  }
  result.pmax_feasible = solve_at(count - 1, false).phases.feasible;
  if (best_k >= 0) {
    // The best fine level and its neighbours are revisited thoroughly.
    const int lo = std::max(0, best_k - 1);
    const int hi = std::min(count - 1, best_k + 1);
    for (int k = lo; k <= hi; ++k) {
      done[k] = false;
      solve_at(k, true);
    }
    best_k = -1;
    best_rate = 0.0;
    for (int k = 0; k < count; ++k) {
      if (done[k] && solved[k].rate >= 0.0 && improves(solved[k].rate, best_rate)) {
        best_rate = solved[k].rate;
        best_k = k;
      }
    }
  }

  detail::PowerCandidate best;
  if (best_k >= 0) {
    best = solved[best_k];
    // Golden-section polish in log-power between the grid neighbours.
    const double lo = std::log(levels[std::max(0, best_k - 1)].p_a);
    const double hi = std::log(levels[std::min(count - 1, best_k + 1)].p_a);
    if (hi > lo) {
      const auto neg_rate = [&](double log_p) {
        const detail::PowerCandidate c =
            detail::evaluate_power(problem, schedule.level(std::exp(log_p)), scenario.sigma2_b, true);
        iterations += c.phases.sweeps;
        if (c.rate >= 0.0 && improves(c.rate, best.rate)) best = c;
        return c.rate >= 0.0 ? -c.rate : 1.0;
      };
      detail::golden_section_minimize(neg_rate, lo, hi, 1e-3, 10);
    }
  }
  if (best.rate > 0.0) {
    result.phases = best.phases.phases;
    result.p_a = best.level.p_a;
    result.rate = best.rate;
    result.outcome = covertness_at(scenario.noise_model, best.level.tau,
                                   best.level.p_a * best.phases.willie_gain, scenario.xi)
                         .outcome;
  }
  result.iterations = iterations;
  return result;
}

inline SolveResult solve_joint(const ChannelRealization& real, const Scenario& scenario,
                               const SolveOptions& opts) {
  return solve_joint(real, scenario, PowerSchedule(scenario, opts), opts);
}

/// Direct-link-only baseline on the same draw.
inline SolveResult solve_no_irs(const ChannelRealization& real, const Scenario& scenario,
                                const PowerSchedule& schedule, const SolveOptions& opts) {
  return solve_joint(real.without_irs(), scenario, schedule, opts);
}

inline SolveResult solve_no_irs(const ChannelRealization& real, const Scenario& scenario,
                                const SolveOptions& opts) {
  return solve_no_irs(real, scenario, PowerSchedule(scenario, opts), opts);
}

}  // namespace covert_irs

#endif  // COVERT_IRS_OPTIMIZER_HPP
