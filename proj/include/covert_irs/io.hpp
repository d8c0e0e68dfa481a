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

// Serialisation of experiment results. CSV is RFC 4180 with LF line endings
// and shortest round-trip decimal floats; JSON carries the provenance fields
// as well. Each writer has a parser so output can be read back exactly.

#ifndef COVERT_IRS_IO_HPP
#define COVERT_IRS_IO_HPP

#include <nlohmann/json.hpp>

#include <charconv>
#include <cstdint>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <system_error>
#include <utility>
#include <vector>

#include "covert_irs/montecarlo.hpp"

namespace covert_irs {

inline constexpr std::string_view kPointCsvHeader =
    "sweep_value,mean_rate,std_err,feasibility_rate,mean_pa_watts,seed,realizations";
inline constexpr std::string_view kCurvesCsvHeader = "series,sweep_value,mean_rate,std_err";

/// Shortest decimal that parses back to the same double.
inline std::string format_double(double x) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), x);
  return std::string(buf, res.ptr);
}

inline double parse_double(std::string_view s) {
  double x = 0.0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), x);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size()) {
    throw std::invalid_argument("not a number: " + std::string(s));
  }
  return x;
}

template <class Int>
Int parse_integer(std::string_view s) {
  Int x = 0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), x);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size()) {
    throw std::invalid_argument("not an integer: " + std::string(s));
  }
  return x;
}

namespace io_detail {

inline std::vector<std::string_view> split_lines(std::string_view text) {
  std::vector<std::string_view> lines;
  while (!text.empty()) {
    const std::size_t nl = text.find('\n');
    lines.push_back(text.substr(0, nl));
    if (nl == std::string_view::npos) break;
    text.remove_prefix(nl + 1);
  }
  return lines;
}

inline std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> out;
  for (;;) {
    const std::size_t comma = line.find(',');
    out.push_back(line.substr(0, comma));
    if (comma == std::string_view::npos) break;
    line.remove_prefix(comma + 1);
  }
  return out;
}

inline void expect_header(const std::vector<std::string_view>& lines, std::string_view header) {
  if (lines.empty() || lines.front() != header) {
    throw std::invalid_argument("CSV header mismatch, expected: " + std::string(header));
  }
}

}  // namespace io_detail

inline std::string to_csv(const ExperimentResult& result) {
  std::ostringstream out;
  out << kPointCsvHeader << '\n';
  for (const PointStats& p : result.points) {
    out << format_double(p.sweep_value) << ',' << format_double(p.mean_rate) << ','
        << format_double(p.std_err) << ',' << format_double(p.feasibility_rate) << ','
        << format_double(p.mean_pa_watts) << ',' << p.seed << ',' << p.realizations << '\n';
  }
  return out.str();
}

/// Points of a per-experiment CSV.
inline std::vector<PointStats> parse_csv(std::string_view text) {
  const auto lines = io_detail::split_lines(text);
  io_detail::expect_header(lines, kPointCsvHeader);
  std::vector<PointStats> points;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    if (lines[i].empty()) continue;
    const auto f = io_detail::split_fields(lines[i]);
    if (f.size() != 7) throw std::invalid_argument("CSV row " + std::to_string(i) + ": 7 fields expected");
    PointStats p;
    p.sweep_value = parse_double(f[0]);
    p.mean_rate = parse_double(f[1]);
    p.std_err = parse_double(f[2]);
    p.feasibility_rate = parse_double(f[3]);
    p.mean_pa_watts = parse_double(f[4]);
    p.seed = parse_integer<std::uint64_t>(f[5]);
    p.realizations = parse_integer<int>(f[6]);
    points.push_back(p);
  }
  return points;
}

inline nlohmann::json to_json_value(const ExperimentResult& result) {
  nlohmann::json points = nlohmann::json::array();
  for (const PointStats& p : result.points) {
    points.push_back({{"sweep_value", p.sweep_value},
                      {"mean_rate", p.mean_rate},
                      {"std_err", p.std_err},
                      {"feasibility_rate", p.feasibility_rate},
                      {"mean_pa_watts", p.mean_pa_watts},
                      {"seed", p.seed},
                      {"realizations", p.realizations}});
  }
  return {{"sweep", std::string(sweep_name(result.sweep))},
          {"with_irs", result.with_irs},
          {"seed", result.seed},
          {"realizations", result.realizations},
          {"solver_hash", result.solver_hash},
          {"points", points}};
}

inline ExperimentResult from_json_value(const nlohmann::json& v) {
  ExperimentResult r;
  const auto sweep = parse_sweep_parameter(v.at("sweep").get<std::string>());
  if (!sweep) throw std::invalid_argument("unknown sweep parameter");
  r.sweep = *sweep;
  r.with_irs = v.at("with_irs").get<bool>();
  r.seed = v.at("seed").get<std::uint64_t>();
  r.realizations = v.at("realizations").get<int>();
  r.solver_hash = v.at("solver_hash").get<std::uint64_t>();
  for (const auto& p : v.at("points")) {
    PointStats s;
    s.sweep_value = p.at("sweep_value").get<double>();
    s.mean_rate = p.at("mean_rate").get<double>();
    s.std_err = p.at("std_err").get<double>();
    s.feasibility_rate = p.at("feasibility_rate").get<double>();
    s.mean_pa_watts = p.at("mean_pa_watts").get<double>();
    s.seed = p.at("seed").get<std::uint64_t>();
    s.realizations = p.at("realizations").get<int>();
    r.points.push_back(s);
  }
  return r;
}

inline std::string to_json(const ExperimentResult& result) {
  return to_json_value(result).dump(2) + "\n";
}

inline ExperimentResult parse_json(std::string_view text) {
  return from_json_value(nlohmann::json::parse(text));
}

using LabelledResult = std::pair<std::string, ExperimentResult>;

/// Long-format table with one row per (series, sweep value).
inline std::string curves_to_csv(const std::vector<LabelledResult>& series) {
  std::ostringstream out;
  out << kCurvesCsvHeader << '\n';
  for (const auto& [label, result] : series) {
    for (const PointStats& p : result.points) {
      out << label << ',' << format_double(p.sweep_value) << ',' << format_double(p.mean_rate)
          << ',' << format_double(p.std_err) << '\n';
    }
  }
  return out.str();
}

/// One row of a curves CSV.
struct CurvePoint {
  std::string series;
  double sweep_value = 0.0;
  double mean_rate = 0.0;
  double std_err = 0.0;

  friend bool operator==(const CurvePoint&, const CurvePoint&) = default;
};

inline std::vector<CurvePoint> parse_curves_csv(std::string_view text) {
  const auto lines = io_detail::split_lines(text);
  io_detail::expect_header(lines, kCurvesCsvHeader);
  std::vector<CurvePoint> rows;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    if (lines[i].empty()) continue;
    const auto f = io_detail::split_fields(lines[i]);
    if (f.size() != 4) throw std::invalid_argument("CSV row " + std::to_string(i) + ": 4 fields expected");
    rows.push_back({std::string(f[0]), parse_double(f[1]), parse_double(f[2]), parse_double(f[3])});
  }
  return rows;
}

inline std::string curves_to_json(const std::vector<LabelledResult>& series) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& [label, result] : series) {
    arr.push_back({{"label", label}, {"result", to_json_value(result)}});
  }
  return nlohmann::json{{"series", arr}}.dump(2) + "\n";
}

inline std::vector<LabelledResult> parse_curves_json(std::string_view text) {
  const nlohmann::json doc = nlohmann::json::parse(text);
  std::vector<LabelledResult> out;
  for (const auto& s : doc.at("series")) {
    out.emplace_back(s.at("label").get<std::string>(), from_json_value(s.at("result")));
  }
  return out;
}

}  // namespace covert_irs

#endif  // COVERT_IRS_IO_HPP
