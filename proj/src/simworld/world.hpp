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

// Synthetic livestream platform with known click probabilities.
//
// The true click-through rate of user u on stream i at age a minutes is
//
//   mu = sigmoid(pref_u . quality_i + appeal_i + age_effect(a) + offset(segment_u))
//
// with age_effect(a) = age_scale * (1 - exp(-a / age_tau)). Outcomes are
// Bernoulli(mu), so the aleatoric variance mu (1 - mu) is known exactly for
// every impression.
//
// All randomness is drawn from counter-based substreams keyed by
// (seed, purpose, day, user). Every user-day consumes a fixed number of
// draws whether or not the user is active, churned, or served an empty
// slate, so two rollouts that differ only in ranking policy see identical
// world randomness.

#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "common/config.hpp"
#include "recmodel/features.hpp"

namespace uncerank::sim {

enum class Segment : std::uint8_t { LAU = 0, HAU = 1 };

const char* to_string(Segment s);

struct WorldConfig {
  int n_users = 2000;
  int n_streams = 600;
  int n_tags = 8;
  int d_u = 4;
  double lau_fraction = 0.5;

  int slate_size = 5;
  int n_candidates = 30;
  int requests_per_day = 2;
  double interest_fraction = 0.6;  // share of candidates retrieved from the user's top tags
  int interest_tags = 2;

  // Activity rates; LAU requires rate * 30 < 7.
  double lau_activity_min = 0.05;
  double lau_activity_max = 0.2;
  double hau_activity_min = 0.3;
  double hau_activity_max = 0.9;

  double pref_scale = 1.5;
  double pref_cap = 3.0;
  double tag_center_scale = 1.5;
  double quality_noise = 0.5;
  double base_appeal_mean = 0.0;
  double base_appeal_sd = 0.6;
  double age_scale = 0.6;
  double age_tau = 1440.0;
  double lau_offset = -0.2;
  double hau_offset = 0.0;

  double low_quality_floor = 0.35;
  double churn_penalty = 0.02;
  double lau_penalty_mult = 2.0;
  double hau_penalty_mult = 0.5;
  double churn_decay = 0.1;
  double valuable_relief = 0.005;
  double initial_hazard = 0.0;

  double quality_scale = 1.0;  // P(valuable | click) = clip(mu * quality_scale, 0, 1)
  double watch_scale = 10.0;   // mean watch minutes per click scale

  long stream_life_min = 720;
  long stream_life_max = 7200;
  int horizon_days = 14;
  int max_tenure_days = 365;

  /// When set, every impression has this click probability (test worlds).
  std::optional<double> fixed_ctr;

  rec::FeatureLayout layout;

  void validate() const;  // throws ConfigError
  static WorldConfig from_config(const KeyValueConfig& cfg);
};

struct UserProfile {
  int user_id = 0;
  Segment segment = Segment::HAU;
  std::vector<double> latent_pref;
  double activity_rate = 0.0;
  int tenure_days = 0;
  std::vector<int> interest_tags;  // top tags by pref . tag center
};

struct LiveStream {
  int item_id = 0;
  int category_tag = 0;
  long start_minute = 0;  // global minute (day * 1440 + minute of day); may be negative
  long end_minute = 0;
  std::vector<double> latent_quality;
  double base_appeal = 0.0;

  bool live_at(long minute) const { return start_minute <= minute && minute < end_minute; }
};

struct ImpressionEvent {
  long long event_id = 0;
  int day = 0;
  int user_id = 0;
  int item_id = 0;
  int category_tag = 0;
  long stream_age_min = 0;
  int position = 0;
  Segment segment = Segment::HAU;
  rec::FeatureVector features;
  bool clicked = false;
  bool valuable = false;
  double watch_minutes = 0.0;
};

struct WorldState {
  WorldConfig config;
  std::uint64_t rng_seed = 0;
  int day_index = 1;
  std::vector<UserProfile> users;
  std::vector<LiveStream> streams;
  std::vector<std::vector<double>> tag_centers;
  std::vector<double> churn_state;  // hazard in [0, 1]
  std::vector<std::uint8_t> churned;
  std::uint64_t stream_checksum = 0;  // fold of every consumed world substream

  const UserProfile& user(int user_id) const;    // throws LookupError
  const LiveStream& stream(int item_id) const;   // throws LookupError
};

struct Candidate {
  int item_id = 0;
  int category_tag = 0;
  long age_min = 0;
};

struct SlateRequest {
  int day = 0;
  int user_id = 0;
  Segment segment = Segment::HAU;
  long minute = 0;  // global minute
  int request_index = 0;
  std::vector<Candidate> candidates;
};

/// Ranking callback: returns item ids best first. Only the first
/// `slate_size` are shown; every id must come from the request's candidates.
using SlateProvider = std::function<std::vector<int>(const SlateRequest&)>;

WorldState build_world(const WorldConfig& config, std::uint64_t seed);

double age_effect(const WorldConfig& config, long age_min);

/// True click probability; pure.
double true_ctr(const WorldState& world, int user_id, int item_id, long stream_age_min);

/// mu (1 - mu).
double aleatoric_var(double mu);

/// Simulates one day; `day` must equal world.day_index, which is advanced.
std::vector<ImpressionEvent> generate_day(WorldState& world, int day, const SlateProvider& provider);

/// Applies one day's churn dynamics for a user and returns the new hazard:
/// decay, a per-item penalty for shown items below the quality floor
/// (segment-scaled), relief per valuable event, clamped to [0, 1].
double update_churn(WorldState& world, int user_id, std::span<const ImpressionEvent> shown);

rec::FeatureVector features_for(const WorldState& world, int user_id, int item_id, long age_min);

}  // namespace uncerank::sim
