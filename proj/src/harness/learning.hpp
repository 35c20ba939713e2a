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

// The daily learning loop that sits behind the slate provider.
//
// Serving on day k uses the day k-1 state: recommender checkpoint, Beta
// head, critic and thresholds. After day k's impressions arrive:
//   1. reserve the calibration split (never trained on)
//   2. score every event with the day k-1 models (prequential rows)
//   3. train the recommender, then the Beta head and the critic on frozen Θ
//   4. re-score the trailing calibration window with the new models and
//      recompute thresholds for day k+1

#pragma once

#include <array>
#include <deque>
#include <optional>
#include <span>
#include <vector>

#include "calibration/calibration.hpp"
#include "harness/experiment.hpp"
#include "policy/policy.hpp"
#include "recmodel/model.hpp"
#include "recmodel/train.hpp"
#include "simworld/world.hpp"
#include "unckit/critic.hpp"
#include "unckit/samples.hpp"

namespace uncerank::harness {

/// One prequentially scored impression. Channels that were not computed
/// hold NaN.
struct ScoreRow {
  int day = 0;
  long long event_id = 0;
  int user_id = 0;
  int item_id = 0;
  sim::Segment segment = sim::Segment::HAU;
  long age_min = 0;
  bool calibration = false;
  double f = 0.5;
  int y = 0;
  double e = 0.0;
  double mu_true = 0.0;
  double u_point = 0.0;
  double u_prob = 0.0;
  double u_total = 0.0;
  double u_ensemble = 0.0;
  double u_mcdropout = 0.0;
  rec::FeatureCodes codes;
};

struct SlateLogRow {
  int day = 0;
  int user_id = 0;
  int position = 0;
  int item_id = 0;
  pol::ScoredCandidate cand;
  const char* mode = "off";
};

/// Scores for the reserved calibration events, by source channel.
struct CalibrationScoreRow {
  int day = 0;
  long long event_id = 0;
  double u_point = 0.0;
  double u_prob = 0.0;
  double u_ensemble = 0.0;
  double u_mcdropout = 0.0;
};

struct Needs {
  bool critic = true;
  bool bayes = true;
  bool ensemble = true;
  bool mcdropout = true;

  static Needs all() { return {}; }
  static Needs for_variant(const Variant& v);
};

class LearningSystem {
 public:
  LearningSystem(const ExperimentConfig& cfg, Variant variant, std::uint64_t seed, Needs needs, bool keep_logs);

  /// Slate provider body for day-k requests.
  std::vector<int> serve(const sim::SlateRequest& req, const sim::WorldState& world);

  /// Consumes the day's impressions; `day` must follow the previous call.
  void end_of_day(int day, std::span<const sim::ImpressionEvent> events, const sim::WorldState& world);

  const rec::Checkpoint& checkpoint() const { return ckpt_; }
  const std::vector<rec::Checkpoint>& checkpoints() const { return history_; }  // kept when keep_logs
  const std::optional<unc::CriticModel>& critic() const { return critic_; }
  const std::vector<ScoreRow>& scores() const { return scores_; }
  const std::vector<SlateLogRow>& slate_log() const { return slates_; }
  const std::vector<CalibrationScoreRow>& calibration_scores() const { return cal_scores_; }
  const std::optional<cal::CalibrationThresholds>& thresholds() const { return thresholds_; }
  const pol::PolicyConfig& policy() const { return policy_; }
  bool policy_active(int day) const;

  /// Share of served slate positions whose item differs from the base
  /// (relevance-only) order, over requests where the policy was active.
  double perturbation_rate(sim::Segment s) const;

  /// Recommender-parameter hashes recorded immediately before and after the
  /// uncertainty heads were trained each day; equal pairs witness the freeze.
  const std::vector<std::pair<std::uint64_t, std::uint64_t>>& freeze_log() const { return freeze_; }

 private:
  struct Channels {
    rec::ForwardTrace trace;
    double u_point = 0.0, u_prob = 0.0, u_total = 0.0, u_ens = 0.0, u_mc = 0.0;
  };
  Channels score(const rec::FeatureVector& x, std::uint64_t mc_seed) const;
  double channel(ChannelSource s, const Channels& c) const;
  void recalibrate(int day);

  ExperimentConfig cfg_;
  Variant variant_;
  std::uint64_t seed_;
  Needs needs_;
  bool keep_logs_;

  rec::Checkpoint ckpt_;
  std::optional<unc::CriticModel> critic_;
  std::optional<cal::CalibrationThresholds> thresholds_;
  pol::PolicyConfig policy_;
  int last_day_ = 0;

  std::deque<std::vector<rec::Example>> train_window_;              // per day, training split
  std::deque<std::vector<unc::RealizedErrorSample>> error_window_;  // per day, training split
  std::deque<std::vector<rec::Example>> cal_window_;                // per day, calibration split

  std::vector<rec::Checkpoint> history_;
  std::vector<ScoreRow> scores_;
  std::vector<SlateLogRow> slates_;
  std::vector<CalibrationScoreRow> cal_scores_;
  std::vector<std::pair<std::uint64_t, std::uint64_t>> freeze_;

  struct Tally {
    long changed = 0;
    long positions = 0;
  };
  std::array<Tally, 2> perturbation_{};
};

}  // namespace uncerank::harness
