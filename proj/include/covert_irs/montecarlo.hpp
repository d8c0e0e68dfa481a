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

// Seeded Monte Carlo runner. Every realization owns a substream seed derived
// from (base seed, sweep value, realization index), so a point's result does
// not depend on which other points are swept, on their order, or on thread
// scheduling, and with/without-IRS series see identical fading draws.

#ifndef COVERT_IRS_MONTECARLO_HPP
#define COVERT_IRS_MONTECARLO_HPP

#include <algorithm>
#include <atomic>
#include <bit>
#include <cmath>
#include <cstdint>
#include <exception>
#include <mutex>
#include <optional>
#include <random>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

#include "covert_irs/channel.hpp"
#include "covert_irs/errors.hpp"
#include "covert_irs/optimizer.hpp"

namespace covert_irs {

/// watts = 10^((dBm - 30)/10)
inline double dbm_to_watts(double dbm) { return std::pow(10.0, (dbm - 30.0) / 10.0); }
inline double watts_to_dbm(double watts) { return 10.0 * std::log10(watts) + 30.0; }

enum class SweepParameter { kPMax, kDistance, kUnits, kRho };

inline std::string_view sweep_name(SweepParameter p) {
  switch (p) {
    case SweepParameter::kPMax:
      return "p_max";
    case SweepParameter::kDistance:
      return "d";
    case SweepParameter::kUnits:
      return "n_units";
    case SweepParameter::kRho:
      return "rho";
  }
  return "p_max";
}

inline std::optional<SweepParameter> parse_sweep_parameter(std::string_view name) {
  for (const SweepParameter p : {SweepParameter::kPMax, SweepParameter::kDistance,
                                 SweepParameter::kUnits, SweepParameter::kRho}) {
    if (sweep_name(p) == name) return p;
  }
  return std::nullopt;
}

/// Applies one sweep value. p_max values are in dBm; d relocates Bob to
/// (d, 0) and the IRS to (d/2, 0).
inline Scenario apply_sweep_value(Scenario scenario, SweepParameter param, double value) {
  switch (param) {
    case SweepParameter::kPMax:
      scenario.p_max = dbm_to_watts(value);
      break;
    case SweepParameter::kDistance:
      scenario.set_link_distance(value);
      break;
    case SweepParameter::kUnits:
      if (value != std::floor(value)) {
        throw std::invalid_argument("apply_sweep_value: n_units must be integral");
      }
      scenario.n_units = static_cast<int>(value);
      break;
    case SweepParameter::kRho:
      scenario.noise_model.rho = value;
      break;
  }
  return scenario;
}

struct ExperimentSpec {
  Scenario scenario;
  SweepParameter sweep = SweepParameter::kPMax;
  std::vector<double> values;
  int realizations = 1000;
  std::uint64_t seed = 1;
  bool with_irs = true;
  SolveOptions solver;

  /// Throws std::invalid_argument naming the offending field.
  void validate() const {
    if (realizations < 1) throw std::invalid_argument("realizations must be >= 1");
    if (values.empty()) throw std::invalid_argument("sweep.values must not be empty");
    const bool up = values.size() < 2 || values[1] > values[0];
    for (std::size_t i = 1; i < values.size(); ++i) {
      if (up ? !(values[i] > values[i - 1]) : !(values[i] < values[i - 1])) {
        throw std::invalid_argument("sweep.values must be strictly monotone");
      }
    }
    solver.validate();
    for (const double v : values) apply_sweep_value(scenario, sweep, v).validate();
  }
};

/// Aggregate over the realizations of one sweep value. Rates are weighted by
/// the transmit probability.
struct PointStats {
  double sweep_value = 0.0;
  double mean_rate = 0.0;
  double std_err = 0.0;
  /// Fraction of draws where some phase setting is covert at p_max.
  double feasibility_rate = 0.0;
  double mean_pa_watts = 0.0;
  std::uint64_t seed = 0;
  int realizations = 0;

  friend bool operator==(const PointStats&, const PointStats&) = default;
};

struct ExperimentResult {
  SweepParameter sweep = SweepParameter::kPMax;
  bool with_irs = true;
  std::uint64_t seed = 0;
  int realizations = 0;
  std::uint64_t solver_hash = 0;
  std::vector<PointStats> points;

  friend bool operator==(const ExperimentResult&, const ExperimentResult&) = default;
};

/// FNV-1a over the solver options, recorded as provenance.
inline std::uint64_t solver_options_hash(const SolveOptions& o) {
  std::uint64_t h = 0xCBF29CE484222325ULL;
  const auto feed = [&h](std::uint64_t v) {
    for (int i = 0; i < 8; ++i) {
      h ^= (v >> (8 * i)) & 0xFFU;
      h *= 0x100000001B3ULL;
    }
  };
  feed(static_cast<std::uint64_t>(o.restarts));
  feed(static_cast<std::uint64_t>(o.bcd_sweeps));
  feed(static_cast<std::uint64_t>(o.phase_grid));
  feed(static_cast<std::uint64_t>(o.power_grid));
  feed(std::bit_cast<std::uint64_t>(o.tolerance));
  feed(o.rng_seed);
  feed(o.exact_updates ? 1U : 0U);
  return h;
}

/// Seed of realization r at one sweep value. Keyed on the value's bits, not
/// its position, so reordering or subsetting a sweep changes nothing.
inline std::uint64_t substream_seed(std::uint64_t seed, double sweep_value, std::uint64_t r) {
  const double canonical = sweep_value == 0.0 ? 0.0 : sweep_value;  // folds -0 into +0
  return mix_seed(mix_seed(seed, std::bit_cast<std::uint64_t>(canonical)), r);
}

/// 0 selects std::thread::hardware_concurrency().
inline unsigned resolve_threads(unsigned requested) {
  if (requested > 0) return requested;
  return std::max(1U, std::thread::hardware_concurrency());
}

/// Per-realization record before aggregation.
struct RealizationOutcome {
  double rate = 0.0;
  double p_a = 0.0;
  bool pmax_feasible = false;
};

namespace detail {

// Runs body(i) for i in [0, count) on up to `threads` workers. The first
// failure by index is rethrown after all workers stop.
template <class Body>
void parallel_for(std::size_t count, unsigned threads, Body&& body) {
  threads = std::min<std::size_t>(resolve_threads(threads), std::max<std::size_t>(count, 1));
  std::atomic<std::size_t> next{0};
  std::mutex mu;
  std::size_t failed_at = count;
  std::exception_ptr failure;
  const auto worker = [&]() {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= count) return;
      try {
        body(i);
      } catch (...) {
        const std::lock_guard<std::mutex> lock(mu);
        if (i < failed_at) {
          failed_at = i;
          failure = std::current_exception();
        }
        next.store(count);
      }
    }
  };
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (std::thread& t : pool) t.join();
  }
  if (failure) std::rethrow_exception(failure);
}

}  // namespace detail

/// Solves one seeded draw at `scenario`.
inline RealizationOutcome run_realization(const Scenario& scenario, const PowerSchedule& schedule,
                                          std::uint64_t substream, bool with_irs,
                                          const SolveOptions& solver) {
  std::mt19937_64 rng(substream);
  const ChannelRealization real = sample_realization(scenario, rng);
  SolveOptions opts = solver;
  opts.rng_seed = mix_seed(substream, solver.rng_seed);
  const SolveResult res = with_irs ? solve_joint(real, scenario, schedule, opts)
                                   : solve_no_irs(real, scenario, schedule, opts);
  return {res.rate, res.p_a, res.pmax_feasible};
}

/// Monte Carlo estimate at one scenario. Model errors from a draw are
/// rethrown as ModelError naming the substream index.
inline PointStats run_point(const Scenario& scenario, double sweep_value, int realizations,
                            std::uint64_t seed, bool with_irs, const SolveOptions& solver,
                            unsigned threads = 1) {
  scenario.validate();
  if (realizations < 1) throw std::invalid_argument("realizations must be >= 1");
  const PowerSchedule schedule(scenario, solver);
  std::vector<RealizationOutcome> outcomes(static_cast<std::size_t>(realizations));
  detail::parallel_for(outcomes.size(), threads, [&](std::size_t r) {
    try {
      outcomes[r] = run_realization(scenario, schedule, substream_seed(seed, sweep_value, r),
                                    with_irs, solver);
    } catch (const std::exception& e) {
      throw ModelError("substream " + std::to_string(r) + ": " + e.what());
    }
  });
  // Index-ordered reduction keeps the sums independent of scheduling.
  double sum = 0.0;
  double sum_pa = 0.0;
  int feasible = 0;
  for (const RealizationOutcome& o : outcomes) {
    sum += o.rate;
    sum_pa += o.p_a;
    feasible += o.pmax_feasible ? 1 : 0;
  }
  const double n = static_cast<double>(realizations);
  const double mean = sum / n;
  double ss = 0.0;
  for (const RealizationOutcome& o : outcomes) ss += (o.rate - mean) * (o.rate - mean);
  const double sd = realizations > 1 ? std::sqrt(ss / (n - 1.0)) : 0.0;
  PointStats p;
  p.sweep_value = sweep_value;
  p.mean_rate = scenario.tx_prob * mean;
  p.std_err = scenario.tx_prob * sd / std::sqrt(n);
  p.feasibility_rate = feasible / n;
  p.mean_pa_watts = sum_pa / n;
  p.seed = seed;
  p.realizations = realizations;
  return p;
}

/// run_point at every sweep value with the common base seed.
inline ExperimentResult run_sweep(const ExperimentSpec& spec, unsigned threads = 1) {
  spec.validate();
  ExperimentResult out;
  out.sweep = spec.sweep;
  out.with_irs = spec.with_irs;
  out.seed = spec.seed;
  out.realizations = spec.realizations;
  out.solver_hash = solver_options_hash(spec.solver);
  for (const double v : spec.values) {
    out.points.push_back(run_point(apply_sweep_value(spec.scenario, spec.sweep, v), v,
                                   spec.realizations, spec.seed, spec.with_irs, spec.solver,
                                   threads));
  }
  return out;
}

/// One labelled curve of a multi-series experiment.
struct CurveSeries {
  std::string label;
  ExperimentSpec spec;
};

/// Power sweep from -20 to 30 dBm at N = 25, d = 10, σ² = -60 dBm: with and
/// without the IRS for ρ = 2 and ρ = 5.
inline std::vector<CurveSeries> fig4_template(int realizations = 1000, std::uint64_t seed = 1) {
  std::vector<CurveSeries> out;
  for (const double rho : {2.0, 5.0}) {
    for (const bool irs : {true, false}) {
      ExperimentSpec s;
      s.scenario.noise_model = NoiseUncertaintyModel(dbm_to_watts(-60.0), rho);
      s.scenario.sigma2_b = dbm_to_watts(-60.0);
      s.scenario.n_units = 25;
      s.scenario.set_link_distance(10.0);
      s.sweep = SweepParameter::kPMax;
      for (int dbm = -20; dbm <= 30; dbm += 5) s.values.push_back(dbm);
      s.realizations = realizations;
      s.seed = seed;
      s.with_irs = irs;
      const std::string rho_tag = rho == 2.0 ? "rho2" : "rho5";
      out.push_back({(irs ? "irs_" : "no_irs_") + rho_tag, s});
    }
  }
  return out;
}

/// Distance sweep at ρ = 5, σ² = -30 dBm, P̄ = 0 dBm for N = 16 and N = 64.
inline std::vector<CurveSeries> fig5_template(int realizations = 1000, std::uint64_t seed = 1) {
  std::vector<CurveSeries> out;
  for (const int n : {16, 64}) {
    ExperimentSpec s;
    s.scenario.noise_model = NoiseUncertaintyModel(dbm_to_watts(-30.0), 5.0);
    s.scenario.sigma2_b = dbm_to_watts(-30.0);
    s.scenario.p_max = dbm_to_watts(0.0);
    s.scenario.n_units = n;
    s.sweep = SweepParameter::kDistance;
    s.values = {4, 5, 6, 8, 10, 12, 14, 16, 18, 20, 22};
    s.realizations = realizations;
    s.seed = seed;
    s.with_irs = true;
    out.push_back({"irs_n" + std::to_string(n), s});
  }
  return out;
}

}  // namespace covert_irs

#endif  // COVERT_IRS_MONTECARLO_HPP
