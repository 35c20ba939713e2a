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

// Experiment configuration and ablation variants.

#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "calibration/calibration.hpp"
#include "common/config.hpp"
#include "policy/policy.hpp"
#include "recmodel/train.hpp"
#include "simworld/world.hpp"
#include "unckit/bayes_head.hpp"
#include "unckit/critic.hpp"

namespace uncerank::harness {

/// Which uncertainty signal feeds each policy channel.
enum class ChannelSource { None, Critic, Bayes, Ensemble, McDropout };

struct Variant {
  std::string name;
  pol::PolicyMode mode = pol::PolicyMode::Off;
  ChannelSource point = ChannelSource::None;
  ChannelSource prob = ChannelSource::None;
};

/// unified, epe_only, bayes_only, ensemble, mcdropout, random, off.
Variant variant_by_name(const std::string& name);  // ConfigError when unknown
const std::vector<std::string>& known_variants();

struct ExperimentConfig {
  sim::WorldConfig world;
  rec::TrainConfig train;
  unc::CriticConfig critic;
  unc::BayesConfig bayes;
  std::size_t d_e = 16;
  std::size_t d_h = 32;
  std::size_t n_heads = 10;
  double dropout_rate = 0.1;  // used while training and for MC passes
  int mc_passes = 10;

  double q = 0.95;
  double calibration_fraction = 0.2;
  int calibration_window = 3;
  long n_min = 200;
  int critic_window = 3;
  int bayes_window = 3;

  std::string policy_mode = "unified";  // variant served by simulate/train/report
  double D = 0.15;      // ~5-10% of served positions change on the default world
  double omega = 0.15;
  bool filter_risky = false;
  int policy_start_day = 3;

  int days = 14;
  int replications = 30;
  std::uint64_t seed = 1;
  std::vector<std::string> variants{"off", "unified", "random"};
  std::filesystem::path out_dir = "out";

  KeyValueConfig source;  // the merged key-value input

  void validate() const;
  /// `seed` and `days` are required; every other key has a default.
  static ExperimentConfig from_config(const KeyValueConfig& cfg);
  /// Short stable id derived from the canonical config text.
  std::string run_id() const;
};

/// Named substream seeds derived from the root seed.
std::uint64_t world_seed(std::uint64_t root, int replication);
std::uint64_t learner_seed(std::uint64_t root, int replication);

}  // namespace uncerank::harness
