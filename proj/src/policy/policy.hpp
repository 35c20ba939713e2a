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

// Segment-aware re-ranking on top of the base relevance score r = f(x).
//
//   LAU: r_final = r - D * risky,        risky = u_point > tau_point or u_prob > tau_prob
//   HAU: r_final = r + omega * max(u_point, u_prob)

#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "calibration/calibration.hpp"
#include "simworld/world.hpp"

namespace uncerank::pol {

enum class PolicyMode { Off, DeboostLAU, UcbHAU, SegmentAware, RandomScore };

const char* to_string(PolicyMode m);
PolicyMode parse_mode(const std::string& s);  // ConfigError on unknown names

/// Uniform pseudo-uncertainty range for one channel.
struct UniformRange {
  double lo = 0.0;
  double hi = 0.0;
  /// Same mean and standard deviation as `values`, lower end clamped at 0.
  static UniformRange matching(std::span<const double> values);
  double quantile(double q) const { return lo + q * (hi - lo); }
};

struct PolicyConfig {
  PolicyMode mode = PolicyMode::Off;
  double D = 0.1;
  double omega = 1.0;
  cal::CalibrationThresholds thresholds;
  bool use_point = true;       // channel participates in the risky rule and the HAU max
  bool use_prob = true;
  bool filter_risky = false;   // drop risky items instead of down-weighting them
  std::uint64_t random_seed = 0;
  UniformRange random_point;   // RandomScore pseudo-uncertainty, per channel
  UniformRange random_prob;

  /// Checks D > 0 / omega > 0 for the modes that use them.
  void validate() const;
};

struct ScoredCandidate {
  int user_id = 0;
  int item_id = 0;
  double r = 0.0;
  double u_point = 0.0;
  double u_prob = 0.0;
  bool risky = false;
  double r_final = 0.0;
};

struct RankContext {
  int day = 0;
  int user_id = 0;
  int request_index = 0;
  sim::Segment segment = sim::Segment::HAU;
};

bool flag_risky(double u_point, double u_prob, const cal::CalibrationThresholds& t, bool use_point = true,
                bool use_prob = true);
/// ConfigError unless D > 0.
double score_lau(double r, bool risky, double D);
/// ConfigError unless omega > 0.
double score_hau(double r, double u_point, double u_prob, double omega);

/// Fills risky and r_final in place (replacing u with pseudo-scores under
/// RandomScore) and returns item ids by descending r_final, ties by
/// ascending item id.
std::vector<int> rank(std::vector<ScoredCandidate>& candidates, const PolicyConfig& cfg, const RankContext& ctx);

}  // namespace uncerank::pol
