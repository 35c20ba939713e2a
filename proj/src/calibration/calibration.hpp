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

// Quantile thresholds for the two uncertainty channels.

#pragma once

#include <filesystem>
#include <span>
#include <string>

namespace uncerank::cal {

struct CalibrationThresholds {
  double q = 0.95;
  double tau_point = 0.0;
  double tau_prob = 0.0;
  long n_cal = 0;
  int first_day = 0;
  int last_day = 0;

  bool operator==(const CalibrationThresholds&) const = default;
};

/// Nearest-rank (higher) quantile: sorted[ceil(q n) - 1]. DataError on
/// empty input, ConfigError unless 0 < q < 1.
double quantile(std::span<const double> values, double q);

/// Per-channel thresholds from the reserved calibration split.
/// CalibrationError when fewer than `n_min` scores are available.
CalibrationThresholds calibrate(std::span<const double> u_point, std::span<const double> u_prob, double q,
                                long n_min = 200, int first_day = 0, int last_day = 0);

/// Key-value text: q, tau_point, tau_prob, n_cal, first_day, last_day.
std::string format_thresholds(const CalibrationThresholds& t);
CalibrationThresholds parse_thresholds(const std::string& text);

void save_thresholds(const std::filesystem::path& path, const CalibrationThresholds& t);
CalibrationThresholds load_thresholds(const std::filesystem::path& path);

}  // namespace uncerank::cal
