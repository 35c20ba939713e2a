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

// Closed-loop rollouts and the paired-seed ablation matrix.

#pragma once

#include <functional>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "harness/experiment.hpp"
#include "harness/learning.hpp"
#include "metrics/engagement.hpp"
#include "metrics/metrics.hpp"
#include "simworld/world.hpp"

namespace uncerank::harness {

struct Rollout {
  sim::WorldState world;
  std::unique_ptr<LearningSystem> system;
  std::vector<sim::ImpressionEvent> events;
};

/// Builds the replication's world and runs `cfg.days` days with the
/// variant's policy in the loop.
Rollout run_rollout(const ExperimentConfig& cfg, const Variant& variant, int replication, Needs needs,
                    bool keep_logs);

struct ArmReports {
  met::EngagementReport lau;  // LAU users
  met::EngagementReport hau;  // HAU users
};

/// Engagement over the policy window [policy_start_day, days].
ArmReports arm_reports(const ExperimentConfig& cfg, const sim::WorldState& world,
                       std::span<const sim::ImpressionEvent> events);

struct AblationCell {
  std::string variant;
  std::string arm;     // "lau" or "hau"
  std::string metric;  // e.g. "hlt7_lift"
  std::vector<double> values;  // one per replication where defined
  met::Interval ci;            // bootstrap interval for the mean
};

struct AblationResult {
  std::vector<AblationCell> cells;
  std::vector<std::uint64_t> world_checksums;  // per replication, shared by every variant

  /// Throws LookupError when absent.
  const AblationCell& cell(const std::string& variant, const std::string& arm, const std::string& metric) const;
};

using ProgressFn = std::function<void(int replication, const std::string& variant)>;

/// Paired-seed ablation: each replication rebuilds the same world for every
/// variant; lifts are relative to `off` in the same replication. A
/// world-stream checksum mismatch between variants is a ProtocolError.
AblationResult run_ablation(const ExperimentConfig& cfg, const std::vector<std::string>& variants,
                            const ProgressFn& progress = {});

}  // namespace uncerank::harness
