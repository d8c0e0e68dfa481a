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
#include <string>

#include "covert_irs/config.hpp"
#include "covert_irs/errors.hpp"
#include "covert_irs/io.hpp"

namespace covert_irs {
namespace {

std::string config_error_key(const std::string& text) {
  try {
    parse_config_text(text);
  } catch (const ConfigError& e) {
    return e.key();
  }
  return "<none>";
}

ExperimentResult sample_result() {
  ExperimentResult r;
  r.sweep = SweepParameter::kDistance;
  r.with_irs = false;
  r.seed = 18446744073709551615ULL;
  r.realizations = 3;
  r.solver_hash = 0x0123456789ABCDEFULL;
  r.points.push_back({4.0, 0.1 + 0.2, 1e-300, 0.5, 5e-324, r.seed, 3});
  r.points.push_back({6.0, 12.345678901234567, 0.0, 1.0, 1e-3, r.seed, 3});
  return r;
}

TEST(Units, DbmToWatts) {
  EXPECT_LE(std::abs(dbm_to_watts(-60.0) - 1e-9) / 1e-9, 1e-15);
  EXPECT_DOUBLE_EQ(dbm_to_watts(0.0), 1e-3);
}

TEST(Config, EmptyDocumentUsesDefaults) {
  const RunConfig cfg = parse_config_text("{}");
  EXPECT_EQ(cfg.experiment.realizations, 1000);
  EXPECT_EQ(cfg.modes, std::vector<bool>{true});
  ASSERT_EQ(cfg.experiment.values.size(), 1U);
  EXPECT_NEAR(cfg.experiment.values[0], watts_to_dbm(Scenario{}.p_max), 1e-12);
  EXPECT_TRUE(cfg.curves.empty());
  EXPECT_TRUE(cfg.output.path.empty());
}

TEST(Config, ParsesEveryBlock) {
  const RunConfig cfg = parse_config_text(R"({
    "scenario": {"alice": [0, 0], "bob": [8, 0], "irs": [4, 1], "willie": [1, 12],
                 "n_units": 9, "alpha": 2.5, "sigma2_n_dbm": -70, "sigma2_b_dbm": -65,
                 "rho": 3, "xi": 0.9, "p_max_dbm": 10, "tx_prob": 0.25},
    "sweep": {"parameter": "rho", "values": [2, 3, 4]},
    "experiment": {"realizations": 7, "seed": 42, "modes": ["no_irs", "irs"]},
    "solver": {"restarts": 2, "bcd_sweeps": 10, "phase_grid": 8, "power_grid": 16,
               "tolerance": 1e-5, "rng_seed": 3, "exact_updates": true},
    "output": {"path": "out.json", "format": "json"}
  })");
  const Scenario& s = cfg.experiment.scenario;
  EXPECT_EQ(s.pos_bob, (Point2{8.0, 0.0}));
  EXPECT_EQ(s.pos_irs, (Point2{4.0, 1.0}));
  EXPECT_EQ(s.n_units, 9);
  EXPECT_EQ(s.alpha, 2.5);
  EXPECT_NEAR(s.noise_model.sigma2_n, 1e-10, 1e-24);
  EXPECT_NEAR(s.sigma2_b, dbm_to_watts(-65.0), 1e-24);
  EXPECT_EQ(s.noise_model.rho, 3.0);
  EXPECT_EQ(s.xi, 0.9);
  EXPECT_NEAR(s.p_max, 1e-2, 1e-17);
  EXPECT_EQ(s.tx_prob, 0.25);
  EXPECT_EQ(cfg.experiment.sweep, SweepParameter::kRho);
  EXPECT_EQ(cfg.experiment.values, (std::vector<double>{2, 3, 4}));
  EXPECT_EQ(cfg.experiment.realizations, 7);
  EXPECT_EQ(cfg.experiment.seed, 42U);
  EXPECT_EQ(cfg.modes, (std::vector<bool>{false, true}));
  EXPECT_EQ(cfg.experiment.solver.restarts, 2);
  EXPECT_EQ(cfg.experiment.solver.phase_grid, 8);
  EXPECT_TRUE(cfg.experiment.solver.exact_updates);
  EXPECT_EQ(cfg.output.path, "out.json");
  EXPECT_EQ(cfg.output.format, OutputFormat::kJson);
}

TEST(Config, ErrorsNameTheOffendingKey) {
  EXPECT_EQ(config_error_key(R"({"scenario": {"xi": 1.5}})"), "scenario.xi");
  EXPECT_EQ(config_error_key(R"({"scenario": {"colour": 1}})"), "scenario.colour");
  EXPECT_EQ(config_error_key(R"({"bogus": 1})"), "bogus");
  EXPECT_EQ(config_error_key(R"({"solver": {"phase_grid": 0}})"), "solver.phase_grid");
  EXPECT_EQ(config_error_key(R"({"solver": {"tolerance": "small"}})"), "solver.tolerance");
  EXPECT_EQ(config_error_key(R"({"sweep": {"values": []}})"), "sweep.values");
  EXPECT_EQ(config_error_key(R"({"sweep": {"values": [1, 1]}})"), "sweep.values");
  EXPECT_EQ(config_error_key(R"({"sweep": {"parameter": "power"}})"), "sweep.parameter");
  EXPECT_EQ(config_error_key(R"({"experiment": {"modes": ["irs", "irs"]}})"), "experiment.modes");
  EXPECT_EQ(config_error_key(R"({"experiment": {"seed": -1}})"), "experiment.seed");
  EXPECT_EQ(config_error_key(R"({"output": {"format": "xml"}})"), "output.format");
  EXPECT_EQ(config_error_key(R"({"scenario": {"bob": [5, 0]}})"), "scenario");
  EXPECT_EQ(config_error_key(R"({"curves": {"template": "fig9"}})"), "curves.template");
  EXPECT_EQ(config_error_key(R"({"curves": {"series": [{"label": "a,b"}]}})"),
            "curves.series[0].label");
  EXPECT_EQ(config_error_key("[1, 2]"), "<document>");
  EXPECT_EQ(config_error_key("{not json"), "<document>");
}

TEST(Config, XiMessageReadsCleanly) {
  try {
    parse_config_text(R"({"scenario": {"xi": 2}})");
    FAIL();
  } catch (const ConfigError& e) {
    EXPECT_STREQ(e.what(), "scenario.xi: must lie in [0, 1]");
  }
}

TEST(Config, MissingFileIsConfigError) {
  EXPECT_THROW(load_config("/nonexistent/covert.json"), ConfigError);
}

TEST(Config, TemplatesInheritExperimentSettings) {
  const RunConfig cfg = parse_config_text(
      R"({"experiment": {"realizations": 5, "seed": 8}, "solver": {"phase_grid": 12},
          "curves": {"template": "fig5"}})");
  ASSERT_EQ(cfg.curves.size(), 2U);
  EXPECT_EQ(cfg.curves_template, "fig5");
  for (const CurveSeries& c : cfg.curves) {
    EXPECT_EQ(c.spec.realizations, 5);
    EXPECT_EQ(c.spec.seed, 8U);
    EXPECT_EQ(c.spec.solver.phase_grid, 12);
  }
}

TEST(Config, CustomSeriesOverrideScenario) {
  const RunConfig cfg = parse_config_text(R"({
    "sweep": {"parameter": "p_max", "values": [0, 10]},
    "curves": {"series": [{"label": "base"},
                          {"label": "wide", "with_irs": false, "scenario": {"rho": 8}}]}
  })");
  ASSERT_EQ(cfg.curves.size(), 2U);
  EXPECT_TRUE(cfg.curves[0].spec.with_irs);
  EXPECT_FALSE(cfg.curves[1].spec.with_irs);
  EXPECT_EQ(cfg.curves[1].spec.scenario.noise_model.rho, 8.0);
  EXPECT_EQ(cfg.curves[1].spec.values, (std::vector<double>{0, 10}));
}

TEST(Numbers, ShortestRoundTrip) {
  for (const double x : {0.0, -0.0, 0.1 + 0.2, 1e-300, 5e-324, 1.7976931348623157e308,
                         12.345678901234567, -3.5}) {
    const double back = parse_double(format_double(x));
    EXPECT_EQ(std::bit_cast<std::uint64_t>(back), std::bit_cast<std::uint64_t>(x));
  }
  EXPECT_THROW(parse_double("1.0x"), std::invalid_argument);
  EXPECT_THROW(parse_double(""), std::invalid_argument);
  EXPECT_THROW(parse_integer<unsigned>("-1"), std::invalid_argument);
  EXPECT_EQ(parse_integer<unsigned>("12"), 12U);
}

TEST(Csv, RoundTripIsExact) {
  const ExperimentResult r = sample_result();
  const std::string text = to_csv(r);
  EXPECT_EQ(text.rfind(std::string(kPointCsvHeader) + "\n", 0), 0U);
  EXPECT_EQ(text.find('\r'), std::string::npos);
  EXPECT_EQ(text.back(), '\n');
  EXPECT_EQ(parse_csv(text), r.points);
}

TEST(Csv, RejectsMalformedInput) {
  EXPECT_THROW(parse_csv("a,b\n1,2\n"), std::invalid_argument);
  EXPECT_THROW(parse_csv(std::string(kPointCsvHeader) + "\n1,2,3\n"), std::invalid_argument);
  EXPECT_THROW(parse_csv(std::string(kPointCsvHeader) + "\n1,2,3,4,5,6,x\n"),
               std::invalid_argument);
}

TEST(Json, RoundTripIsExact) {
  const ExperimentResult r = sample_result();
  const std::string text = to_json(r);
  EXPECT_EQ(text.find('\r'), std::string::npos);
  EXPECT_EQ(parse_json(text), r);
  EXPECT_NE(text.find("\"with_irs\": false"), std::string::npos);
}

TEST(Curves, CsvAndJsonRoundTrip) {
  ExperimentResult a = sample_result();
  ExperimentResult b = sample_result();
  b.with_irs = true;
  b.points.pop_back();
  const std::vector<LabelledResult> series{{"first", a}, {"second", b}};
  const auto rows = parse_curves_csv(curves_to_csv(series));
  ASSERT_EQ(rows.size(), 3U);
  EXPECT_EQ(rows[0], (CurvePoint{"first", 4.0, 0.1 + 0.2, 1e-300}));
  EXPECT_EQ(rows[2].series, "second");
  EXPECT_EQ(parse_curves_json(curves_to_json(series)), series);
}

}  // namespace
}  // namespace covert_irs
