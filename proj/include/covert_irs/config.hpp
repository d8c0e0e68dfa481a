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

// JSON experiment configuration. Powers are given in dBm and converted to
// watts here; every other module works in watts. Unknown keys are rejected
// and every error names the dotted path of the offending key.
//
//   {
//     "scenario":   {"alice": [0, 0], "bob": [10, 0], "irs": [5, 0],
//                    "willie": [0, 15], "n_units": 25, "alpha": 3,
//                    "sigma2_n_dbm": -60, "sigma2_b_dbm": -60, "rho": 5,
//                    "xi": 0.99, "p_max_dbm": 20, "tx_prob": 0.5},
//     "sweep":      {"parameter": "p_max", "values": [-20, -10, 0]},
//     "experiment": {"realizations": 1000, "seed": 1, "modes": ["irs", "no_irs"]},
//     "solver":     {"restarts": 1, "bcd_sweeps": 40, "phase_grid": 16,
//                    "power_grid": 64, "tolerance": 1e-6, "rng_seed": 1,
//                    "exact_updates": false},
//     "curves":     {"template": "fig4"}  or  {"series": [{"label": "a",
//                    "with_irs": true, "scenario": {"rho": 2}}]},
//     "output":     {"path": "out.csv", "format": "csv"}
//   }
//
// Every block is optional; omitted fields keep the library defaults.

#ifndef COVERT_IRS_CONFIG_HPP
#define COVERT_IRS_CONFIG_HPP

#include <nlohmann/json.hpp>

#include <cmath>
#include <cstdint>
#include <fstream>
#include <initializer_list>
#include <limits>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "covert_irs/errors.hpp"
#include "covert_irs/montecarlo.hpp"

namespace covert_irs {

enum class OutputFormat { kCsv, kJson };

struct OutputSpec {
  std::string path;  ///< empty writes to stdout
  OutputFormat format = OutputFormat::kCsv;
};

struct RunConfig {
  ExperimentSpec experiment;  ///< with_irs is set per mode
  /// Solve modes in order; true is "irs", false is "no_irs".
  std::vector<bool> modes{true};
  std::vector<CurveSeries> curves;
  std::string curves_template;  ///< "fig4", "fig5" or empty
  OutputSpec output;
};

namespace config_detail {

using nlohmann::json;

inline std::string join(const std::string& prefix, std::string_view key) {
  return prefix.empty() ? std::string(key) : prefix + "." + std::string(key);
}

inline void reject_unknown(const json& obj, const std::string& where,
                           std::initializer_list<std::string_view> allowed) {
  if (!obj.is_object()) throw ConfigError(where, "must be an object");
  for (const auto& item : obj.items()) {
    bool ok = false;
    for (const std::string_view a : allowed) ok = ok || item.key() == a;
    if (!ok) throw ConfigError(join(where, item.key()), "unknown key");
  }
}

inline double number(const json& v, const std::string& key) {
  if (!v.is_number()) throw ConfigError(key, "must be a number");
  const double x = v.get<double>();
  if (!std::isfinite(x)) throw ConfigError(key, "must be finite");
  return x;
}

inline std::int64_t integer(const json& v, const std::string& key) {
  if (!v.is_number_integer()) throw ConfigError(key, "must be an integer");
  return v.get<std::int64_t>();
}

inline int count(const json& v, const std::string& key) {
  const std::int64_t n = integer(v, key);
  if (n < 1 || n > std::numeric_limits<int>::max()) throw ConfigError(key, "must be >= 1");
  return static_cast<int>(n);
}

inline std::uint64_t seed(const json& v, const std::string& key) {
  if (v.is_number_unsigned()) return v.get<std::uint64_t>();
  if (v.is_number_integer() && v.get<std::int64_t>() >= 0) {
    return static_cast<std::uint64_t>(v.get<std::int64_t>());
  }
  throw ConfigError(key, "must be a non-negative integer");
}

inline bool boolean(const json& v, const std::string& key) {
  if (!v.is_boolean()) throw ConfigError(key, "must be true or false");
  return v.get<bool>();
}

inline std::string text(const json& v, const std::string& key) {
  if (!v.is_string()) throw ConfigError(key, "must be a string");
  return v.get<std::string>();
}

inline Point2 point(const json& v, const std::string& key) {
  if (!v.is_array() || v.size() != 2) throw ConfigError(key, "must be a [x, y] pair");
  return {number(v[0], key + "[0]"), number(v[1], key + "[1]")};
}

inline void apply_scenario(const json& obj, const std::string& where, Scenario& s) {
  reject_unknown(obj, where,
                 {"alice", "bob", "irs", "willie", "n_units", "alpha", "sigma2_n_dbm",
                  "sigma2_b_dbm", "rho", "xi", "p_max_dbm", "tx_prob"});
  const auto key = [&](std::string_view k) { return join(where, k); };
  if (obj.contains("alice")) s.pos_alice = point(obj["alice"], key("alice"));
  if (obj.contains("bob")) s.pos_bob = point(obj["bob"], key("bob"));
  if (obj.contains("irs")) s.pos_irs = point(obj["irs"], key("irs"));
  if (obj.contains("willie")) s.pos_willie = point(obj["willie"], key("willie"));
  if (obj.contains("n_units")) {
    const std::int64_t n = integer(obj["n_units"], key("n_units"));
    if (n < 0 || n > 1'000'000) throw ConfigError(key("n_units"), "must lie in [0, 1000000]");
    s.n_units = static_cast<int>(n);
  }
  if (obj.contains("alpha")) {
    s.alpha = number(obj["alpha"], key("alpha"));
    if (!(s.alpha > 0.0)) throw ConfigError(key("alpha"), "must be positive");
  }
  if (obj.contains("sigma2_n_dbm")) {
    s.noise_model.sigma2_n = dbm_to_watts(number(obj["sigma2_n_dbm"], key("sigma2_n_dbm")));
    if (!(s.noise_model.sigma2_n > 0.0) || !std::isfinite(s.noise_model.sigma2_n)) {
      throw ConfigError(key("sigma2_n_dbm"), "converts to a non-positive or infinite power");
    }
  }
  if (obj.contains("sigma2_b_dbm")) {
    s.sigma2_b = dbm_to_watts(number(obj["sigma2_b_dbm"], key("sigma2_b_dbm")));
    if (!(s.sigma2_b > 0.0) || !std::isfinite(s.sigma2_b)) {
      throw ConfigError(key("sigma2_b_dbm"), "converts to a non-positive or infinite power");
    }
  }
  if (obj.contains("rho")) {
    s.noise_model.rho = number(obj["rho"], key("rho"));
    if (!(s.noise_model.rho >= 1.0)) throw ConfigError(key("rho"), "must be >= 1");
  }
  if (obj.contains("xi")) {
    s.xi = number(obj["xi"], key("xi"));
    if (!(s.xi >= 0.0 && s.xi <= 1.0)) throw ConfigError(key("xi"), "must lie in [0, 1]");
  }
  if (obj.contains("p_max_dbm")) {
    s.p_max = dbm_to_watts(number(obj["p_max_dbm"], key("p_max_dbm")));
    if (!std::isfinite(s.p_max)) throw ConfigError(key("p_max_dbm"), "converts to infinity");
  }
  if (obj.contains("tx_prob")) {
    s.tx_prob = number(obj["tx_prob"], key("tx_prob"));
    if (!(s.tx_prob >= 0.0 && s.tx_prob <= 1.0)) {
      throw ConfigError(key("tx_prob"), "must lie in [0, 1]");
    }
  }
}

inline void apply_solver(const json& obj, const std::string& where, SolveOptions& o) {
  reject_unknown(obj, where,
                 {"restarts", "bcd_sweeps", "phase_grid", "power_grid", "tolerance", "rng_seed",
                  "exact_updates"});
  const auto key = [&](std::string_view k) { return join(where, k); };
  if (obj.contains("restarts")) o.restarts = count(obj["restarts"], key("restarts"));
  if (obj.contains("bcd_sweeps")) o.bcd_sweeps = count(obj["bcd_sweeps"], key("bcd_sweeps"));
  if (obj.contains("phase_grid")) o.phase_grid = count(obj["phase_grid"], key("phase_grid"));
  if (obj.contains("power_grid")) o.power_grid = count(obj["power_grid"], key("power_grid"));
  if (obj.contains("tolerance")) {
    o.tolerance = number(obj["tolerance"], key("tolerance"));
    if (!(o.tolerance > 0.0)) throw ConfigError(key("tolerance"), "must be positive");
  }
  if (obj.contains("rng_seed")) o.rng_seed = seed(obj["rng_seed"], key("rng_seed"));
  if (obj.contains("exact_updates")) {
    o.exact_updates = boolean(obj["exact_updates"], key("exact_updates"));
  }
}

inline bool mode_flag(const json& v, const std::string& key) {
  const std::string m = text(v, key);
  if (m == "irs") return true;
  if (m == "no_irs") return false;
  throw ConfigError(key, "must be \"irs\" or \"no_irs\"");
}

// Checks that the scenario at every sweep value is valid, attributing
// failures to the scenario block or the sweep values.
inline void check_spec(const ExperimentSpec& spec, const std::string& where) {
  try {
    spec.scenario.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(join(where, "scenario"), e.what());
  }
  try {
    spec.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(join(where, "sweep.values"), e.what());
  }
}

}  // namespace config_detail

/// Parses a configuration document. Throws ConfigError naming the key.
inline RunConfig parse_config(const nlohmann::json& doc) {
  using namespace config_detail;
  if (!doc.is_object()) throw ConfigError("<document>", "must be a JSON object");
  reject_unknown(doc, "", {"scenario", "sweep", "experiment", "solver", "curves", "output"});
  RunConfig cfg;
  ExperimentSpec& spec = cfg.experiment;
  if (doc.contains("scenario")) apply_scenario(doc["scenario"], "scenario", spec.scenario);
  if (doc.contains("solver")) apply_solver(doc["solver"], "solver", spec.solver);
  if (doc.contains("sweep")) {
    const json& sw = doc["sweep"];
    reject_unknown(sw, "sweep", {"parameter", "values"});
    if (sw.contains("parameter")) {
      const std::string name = text(sw["parameter"], "sweep.parameter");
      const auto p = parse_sweep_parameter(name);
      if (!p) throw ConfigError("sweep.parameter", "must be one of p_max, d, n_units, rho");
      spec.sweep = *p;
    }
    if (sw.contains("values")) {
      if (!sw["values"].is_array()) throw ConfigError("sweep.values", "must be an array");
      for (std::size_t i = 0; i < sw["values"].size(); ++i) {
        spec.values.push_back(number(sw["values"][i], "sweep.values[" + std::to_string(i) + "]"));
      }
      if (spec.values.empty()) throw ConfigError("sweep.values", "must not be empty");
    }
  }
  if (spec.values.empty()) spec.values.push_back(watts_to_dbm(spec.scenario.p_max));
  if (doc.contains("experiment")) {
    const json& ex = doc["experiment"];
    reject_unknown(ex, "experiment", {"realizations", "seed", "modes"});
    if (ex.contains("realizations")) {
      spec.realizations = count(ex["realizations"], "experiment.realizations");
    }
    if (ex.contains("seed")) spec.seed = seed(ex["seed"], "experiment.seed");
    if (ex.contains("modes")) {
      const json& m = ex["modes"];
      if (!m.is_array() || m.empty()) {
        throw ConfigError("experiment.modes", "must be a non-empty array");
      }
      cfg.modes.clear();
      for (std::size_t i = 0; i < m.size(); ++i) {
        const bool flag = mode_flag(m[i], "experiment.modes[" + std::to_string(i) + "]");
        for (const bool seen : cfg.modes) {
          if (seen == flag) throw ConfigError("experiment.modes", "lists a mode twice");
        }
        cfg.modes.push_back(flag);
      }
    }
  }
  check_spec(spec, "");
  if (doc.contains("curves")) {
    const json& cv = doc["curves"];
    reject_unknown(cv, "curves", {"template", "series"});
    if (cv.contains("template") == cv.contains("series")) {
      throw ConfigError("curves", "needs exactly one of template or series");
    }
    if (cv.contains("template")) {
      cfg.curves_template = text(cv["template"], "curves.template");
      if (cfg.curves_template == "fig4") {
        cfg.curves = fig4_template(spec.realizations, spec.seed);
      } else if (cfg.curves_template == "fig5") {
        cfg.curves = fig5_template(spec.realizations, spec.seed);
      } else {
        throw ConfigError("curves.template", "must be fig4 or fig5");
      }
      for (CurveSeries& c : cfg.curves) c.spec.solver = spec.solver;
    } else {
      const json& list = cv["series"];
      if (!list.is_array() || list.empty()) {
        throw ConfigError("curves.series", "must be a non-empty array");
      }
      for (std::size_t i = 0; i < list.size(); ++i) {
        const std::string where = "curves.series[" + std::to_string(i) + "]";
        const json& item = list[i];
        reject_unknown(item, where, {"label", "with_irs", "scenario"});
        if (!item.contains("label")) throw ConfigError(join(where, "label"), "is required");
        CurveSeries c{text(item["label"], join(where, "label")), spec};
        if (c.label.empty() || c.label.find_first_of(",\"\r\n") != std::string::npos) {
          throw ConfigError(join(where, "label"), "must be non-empty without , \" or newlines");
        }
        if (item.contains("with_irs")) {
          c.spec.with_irs = boolean(item["with_irs"], join(where, "with_irs"));
        }
        if (item.contains("scenario")) {
          apply_scenario(item["scenario"], join(where, "scenario"), c.spec.scenario);
        }
        check_spec(c.spec, where);
        cfg.curves.push_back(std::move(c));
      }
    }
  }
  if (doc.contains("output")) {
    const json& out = doc["output"];
    reject_unknown(out, "output", {"path", "format"});
    if (out.contains("path")) cfg.output.path = text(out["path"], "output.path");
    if (out.contains("format")) {
      const std::string f = text(out["format"], "output.format");
      if (f == "csv") {
        cfg.output.format = OutputFormat::kCsv;
      } else if (f == "json") {
        cfg.output.format = OutputFormat::kJson;
      } else {
        throw ConfigError("output.format", "must be csv or json");
      }
    }
  }
  return cfg;
}

inline RunConfig parse_config_text(const std::string& text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError("<document>", std::string("invalid JSON: ") + e.what());
  }
  return parse_config(doc);
}

inline RunConfig load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("<file>", "cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config_text(buf.str());
}

}  // namespace covert_irs

#endif  // COVERT_IRS_CONFIG_HPP
