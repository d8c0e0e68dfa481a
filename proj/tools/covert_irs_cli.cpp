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

// covert-irs: experiment runner and self-check entry point.
//
//   covert-irs run      --config cfg.json [--seed N] [--realizations N]
//                       [--out path] [--format csv|json] [--no-irs]
//   covert-irs curves   --config cfg.json [same overrides]
//   covert-irs validate [--level fast|full]
//
// Exit status: 0 success, 1 validation failure or I/O error, 2 invalid
// configuration or usage, 3 model error. COVERT_IRS_THREADS caps worker
// threads (0 or unset = one per hardware thread).

#include <CLI11.hpp>

#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "covert_irs/config.hpp"
#include "covert_irs/errors.hpp"
#include "covert_irs/io.hpp"
#include "covert_irs/montecarlo.hpp"
#include "covert_irs/validate.hpp"

namespace {

using namespace covert_irs;

constexpr int kExitFailure = 1;
constexpr int kExitConfig = 2;
constexpr int kExitModel = 3;

struct Overrides {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::optional<int> realizations;
  std::string out;
  std::string format;
  bool no_irs = false;
};

unsigned threads_from_env() {
  const char* raw = std::getenv("COVERT_IRS_THREADS");
  if (raw == nullptr || *raw == '\0') return 0;
  try {
    return parse_integer<unsigned>(raw);
  } catch (const std::invalid_argument&) {
    throw ConfigError("COVERT_IRS_THREADS", "must be a non-negative integer");
  }
}

RunConfig load_with_overrides(const Overrides& o) {
  RunConfig cfg = load_config(o.config);
  if (o.seed) {
    cfg.experiment.seed = *o.seed;
    for (CurveSeries& c : cfg.curves) c.spec.seed = *o.seed;
  }
  if (o.realizations) {
    if (*o.realizations < 1) throw ConfigError("--realizations", "must be >= 1");
    cfg.experiment.realizations = *o.realizations;
    for (CurveSeries& c : cfg.curves) c.spec.realizations = *o.realizations;
  }
  if (!o.out.empty()) cfg.output.path = o.out;
  if (!o.format.empty()) {
    cfg.output.format = o.format == "json" ? OutputFormat::kJson : OutputFormat::kCsv;
  }
  if (o.no_irs) cfg.modes = {false};
  return cfg;
}

// "dir/name.ext" -> "dir/name<suffix>.ext"
std::string suffixed(const std::string& path, const std::string& suffix) {
  const std::size_t slash = path.find_last_of('/');
  const std::size_t dot = path.find_last_of('.');
  if (dot == std::string::npos || (slash != std::string::npos && dot < slash)) return path + suffix;
  return path.substr(0, dot) + suffix + path.substr(dot);
}

void write_text(const std::string& path, const std::string& text) {
  if (path.empty()) {
    std::cout << text << std::flush;
    return;
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out || !(out << text) || !out.flush()) {
    throw std::runtime_error("cannot write " + path);
  }
}

void print_point(std::ostream& os, const std::string& tag, SweepParameter sweep,
                 const PointStats& p) {
  os << '[' << tag << "] " << sweep_name(sweep) << '=' << format_double(p.sweep_value)
     << " mean_rate=" << format_double(p.mean_rate) << " std_err=" << format_double(p.std_err)
     << " feasibility_rate=" << format_double(p.feasibility_rate)
     << " mean_pa_watts=" << format_double(p.mean_pa_watts) << '\n';
}

int cmd_run(const Overrides& o) {
  const RunConfig cfg = load_with_overrides(o);
  const unsigned threads = threads_from_env();
  std::ostream& log = cfg.output.path.empty() ? std::cerr : std::cout;
  if (cfg.modes.size() > 1 && cfg.output.path.empty()) {
    throw ConfigError("output.path", "required when more than one mode is run");
  }
  for (const bool irs : cfg.modes) {
    ExperimentSpec spec = cfg.experiment;
    spec.with_irs = irs;
    const std::string tag = irs ? "irs" : "no_irs";
    const ExperimentResult res = run_sweep(spec, threads);
    for (const PointStats& p : res.points) print_point(log, tag, res.sweep, p);
    const std::string path =
        cfg.modes.size() > 1 ? suffixed(cfg.output.path, "_" + tag) : cfg.output.path;
    write_text(path, cfg.output.format == OutputFormat::kJson ? to_json(res) : to_csv(res));
  }
  return 0;
}

int cmd_curves(const Overrides& o) {
  RunConfig cfg = load_with_overrides(o);
  if (cfg.curves.empty()) throw ConfigError("curves", "block is required for this command");
  if (o.no_irs) {
    std::erase_if(cfg.curves, [](const CurveSeries& c) { return c.spec.with_irs; });
    if (cfg.curves.empty()) throw ConfigError("--no-irs", "leaves no series to run");
  }
  const unsigned threads = threads_from_env();
  std::ostream& log = cfg.output.path.empty() ? std::cerr : std::cout;
  std::vector<LabelledResult> all;
  for (const CurveSeries& c : cfg.curves) {
    all.emplace_back(c.label, run_sweep(c.spec, threads));
    for (const PointStats& p : all.back().second.points) {
      print_point(log, c.label, all.back().second.sweep, p);
    }
  }
  write_text(cfg.output.path,
             cfg.output.format == OutputFormat::kJson ? curves_to_json(all) : curves_to_csv(all));
  return 0;
}

int cmd_validate(const std::string& level, const std::string& fault) {
  ValidationOptions opts;
  opts.level = level == "full" ? ValidationLevel::kFull : ValidationLevel::kFast;
  if (fault == "ei") opts.ei = [](double x) { return expint_ei(x) * (1.0 + 1e-3); };
  bool ok = true;
  for (const SuiteReport& r : run_validation(opts)) {
    std::printf("%s %-13s worst=%.3e tol=%.1e  %s\n", r.passed ? "PASS" : "FAIL", r.name.c_str(),
                r.worst, r.tolerance, r.detail.c_str());
    ok = ok && r.passed;
  }
  std::fflush(stdout);
  return ok ? 0 : kExitFailure;
}

void add_experiment_flags(CLI::App* cmd, Overrides& o) {
  cmd->add_option("--config", o.config, "JSON configuration file")->required();
  cmd->add_option("--seed", o.seed, "base seed (overrides experiment.seed)");
  cmd->add_option("--realizations", o.realizations, "realizations per sweep point");
  cmd->add_option("--out", o.out, "output path (stdout when empty)");
  cmd->add_option("--format", o.format, "csv or json")
      ->check(CLI::IsMember({"csv", "json"}));
  cmd->add_flag("--no-irs", o.no_irs, "solve the direct-link baseline only");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Covert communication with an intelligent reflecting surface"};
  app.require_subcommand(1);
  Overrides run_opts;
  Overrides curve_opts;
  CLI::App* run = app.add_subcommand("run", "run one parameter sweep");
  add_experiment_flags(run, run_opts);
  CLI::App* curves = app.add_subcommand("curves", "run every series of a curve template");
  add_experiment_flags(curves, curve_opts);
  CLI::App* validate = app.add_subcommand("validate", "run the numerical self-checks");
  std::string level = "fast";
  std::string fault;
  validate->add_option("--level", level, "fast or full")->check(CLI::IsMember({"fast", "full"}));
  // Test hook: perturbs Ei so the harness can see the suite fail.
  validate->add_option("--inject-fault", fault)->check(CLI::IsMember({"ei"}))->group("");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  try {
    if (run->parsed()) return cmd_run(run_opts);
    if (curves->parsed()) return cmd_curves(curve_opts);
    return cmd_validate(level, fault);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const ModelError& e) {
    std::cerr << "model error: " << e.what() << '\n';
    return kExitModel;
  } catch (const std::invalid_argument& e) {
    std::cerr << "model error: " << e.what() << '\n';
    return kExitModel;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitFailure;
  }
}
