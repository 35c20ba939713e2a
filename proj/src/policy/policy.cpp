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

#include "policy/policy.hpp"

#include <algorithm>
#include <cmath>

#include "common/errors.hpp"
#include "common/rng.hpp"

namespace uncerank::pol {

const char* to_string(PolicyMode m) {
  switch (m) {
    case PolicyMode::Off:
      return "off";
    case PolicyMode::DeboostLAU:
      return "deboost_lau";
    case PolicyMode::UcbHAU:
      return "ucb_hau";
    case PolicyMode::SegmentAware:
      return "segment_aware";
    case PolicyMode::RandomScore:
      return "random_score";
  }
  return "?";
}

PolicyMode parse_mode(const std::string& s) {
  for (auto m : {PolicyMode::Off, PolicyMode::DeboostLAU, PolicyMode::UcbHAU, PolicyMode::SegmentAware,
                 PolicyMode::RandomScore}) {
    if (s == to_string(m)) return m;
  }
  throw ConfigError("unknown policy mode '" + s + "'");
}

UniformRange UniformRange::matching(std::span<const double> values) {
  if (values.empty()) throw DataError("cannot match a uniform range to an empty sample");
  double mean = 0.0;
  for (double v : values) mean += v;
  mean /= static_cast<double>(values.size());
  double ss = 0.0;
  for (double v : values) ss += (v - mean) * (v - mean);
  const double half = std::sqrt(3.0 * ss / static_cast<double>(values.size()));
  return {std::max(0.0, mean - half), mean + half};
}

void PolicyConfig::validate() const {
  const bool lau = mode == PolicyMode::DeboostLAU || mode == PolicyMode::SegmentAware || mode == PolicyMode::RandomScore;
  const bool hau = mode == PolicyMode::UcbHAU || mode == PolicyMode::SegmentAware || mode == PolicyMode::RandomScore;
  if (lau && !(D > 0.0)) throw ConfigError("policy.D must be > 0");
  if (hau && !(omega > 0.0)) throw ConfigError("policy.omega must be > 0");
  if (mode != PolicyMode::Off && !use_point && !use_prob) throw ConfigError("policy needs at least one channel");
}

bool flag_risky(double u_point, double u_prob, const cal::CalibrationThresholds& t, bool use_point, bool use_prob) {
  return (use_point && u_point > t.tau_point) || (use_prob && u_prob > t.tau_prob);
}

double score_lau(double r, bool risky, double D) {
  if (!(D > 0.0)) throw ConfigError("deboost magnitude D must be > 0");
  return risky ? r - D : r;
}

double score_hau(double r, double u_point, double u_prob, double omega) {
  if (!(omega > 0.0)) throw ConfigError("exploration weight omega must be > 0");
  return r + omega * std::max(u_point, u_prob);
}

std::vector<int> rank(std::vector<ScoredCandidate>& cands, const PolicyConfig& cfg, const RankContext& ctx) {
  const bool lau_user = ctx.segment == sim::Segment::LAU;
  bool deboost = false, ucb = false;
  switch (cfg.mode) {
    case PolicyMode::Off:
      break;
    case PolicyMode::DeboostLAU:
      deboost = lau_user;
      break;
    case PolicyMode::UcbHAU:
      ucb = !lau_user;
      break;
    case PolicyMode::SegmentAware:
    case PolicyMode::RandomScore:
      deboost = lau_user;
      ucb = !lau_user;
      break;
  }
  cal::CalibrationThresholds t = cfg.thresholds;
  if (cfg.mode == PolicyMode::RandomScore) {
    t.tau_point = cfg.random_point.quantile(t.q);
    t.tau_prob = cfg.random_prob.quantile(t.q);
  }
  for (auto& c : cands) {
    if (cfg.mode == PolicyMode::RandomScore) {
      auto rng = CounterRng::substream(cfg.random_seed, "policy/random", static_cast<std::uint64_t>(ctx.day),
                                       static_cast<std::uint64_t>(ctx.user_id),
                                       (static_cast<std::uint64_t>(ctx.request_index) << 32) ^
                                           static_cast<std::uint32_t>(c.item_id));
      c.u_point = rng.uniform(cfg.random_point.lo, cfg.random_point.hi);
      c.u_prob = rng.uniform(cfg.random_prob.lo, cfg.random_prob.hi);
    }
    c.risky = flag_risky(c.u_point, c.u_prob, t, cfg.use_point, cfg.use_prob);
    if (deboost) {
      c.r_final = score_lau(c.r, c.risky, cfg.D);
    } else if (ucb) {
      c.r_final = score_hau(c.r, cfg.use_point ? c.u_point : 0.0, cfg.use_prob ? c.u_prob : 0.0, cfg.omega);
    } else {
      c.r_final = c.r;
    }
  }
  std::vector<const ScoredCandidate*> order;
  order.reserve(cands.size());
  for (const auto& c : cands) {
    if (deboost && cfg.filter_risky && c.risky) continue;
    order.push_back(&c);
  }
  std::sort(order.begin(), order.end(), [](const ScoredCandidate* a, const ScoredCandidate* b) {
    if (a->r_final != b->r_final) return a->r_final > b->r_final;
    return a->item_id < b->item_id;
  });
  std::vector<int> ids;
  ids.reserve(order.size());
  for (const auto* c : order) ids.push_back(c->item_id);
  return ids;
}

}  // namespace uncerank::pol
