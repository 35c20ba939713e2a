// Copyright (c) 2026 The uncerank Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//------------------------------------------------------------------------------

#include "calibration/calibration.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "common/config.hpp"
#include "common/errors.hpp"
#include "common/io.hpp"

namespace uncerank::cal {

double quantile(std::span<const double> values, double q) {
  if (!(q > 0.0 && q < 1.0)) throw ConfigError("quantile level must be in (0, 1)");
  if (values.empty()) throw DataError("quantile of an empty list");
  std::vector<double> s(values.begin(), values.end());
  const auto n = s.size();
  auto k = static_cast<std::size_t>(std::ceil(q * static_cast<double>(n)));
  k = std::clamp<std::size_t>(k, 1, n) - 1;
  std::nth_element(s.begin(), s.begin() + static_cast<std::ptrdiff_t>(k), s.end());
  return s[k];
}

CalibrationThresholds calibrate(std::span<const double> u_point, std::span<const double> u_prob, double q,
                                long n_min, int first_day, int last_day) {
  if (u_point.size() != u_prob.size()) throw ShapeError("calibration channels differ in length");
  const long n = static_cast<long>(u_point.size());
  if (n < n_min) {
    throw CalibrationError("calibration needs at least " + std::to_string(n_min) + " scores, got " +
                           std::to_string(n));
  }
  CalibrationThresholds t;
  t.q = q;
  t.tau_point = quantile(u_point, q);
  t.tau_prob = quantile(u_prob, q);
  t.n_cal = n;
  t.first_day = first_day;
  t.last_day = last_day;
  return t;
}

std::string format_thresholds(const CalibrationThresholds& t) {
  std::string s;
  s += "q = " + io::fmt(t.q) + "\n";
  s += "tau_point = " + io::fmt(t.tau_point) + "\n";
  s += "tau_prob = " + io::fmt(t.tau_prob) + "\n";
  s += "n_cal = " + io::fmt(t.n_cal) + "\n";
  s += "first_day = " + io::fmt(t.first_day) + "\n";
  s += "last_day = " + io::fmt(t.last_day) + "\n";
  return s;
}

CalibrationThresholds parse_thresholds(const std::string& text) {
  const auto kv = KeyValueConfig::parse(text, "thresholds");
  CalibrationThresholds t;
  t.q = kv.get_double("q");
  t.tau_point = kv.get_double("tau_point");
  t.tau_prob = kv.get_double("tau_prob");
  t.n_cal = static_cast<long>(kv.get_int("n_cal"));
  t.first_day = static_cast<int>(kv.get_int("first_day"));
  t.last_day = static_cast<int>(kv.get_int("last_day"));
  return t;
}

void save_thresholds(const std::filesystem::path& path, const CalibrationThresholds& t) {
  io::write_atomic(path, format_thresholds(t));
}

CalibrationThresholds load_thresholds(const std::filesystem::path& path) {
  return parse_thresholds(io::read_file(path));
}

}  // namespace uncerank::cal
