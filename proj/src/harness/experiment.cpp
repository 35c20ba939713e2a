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

#include "harness/experiment.hpp"

#include <algorithm>

#include "common/errors.hpp"
#include "common/io.hpp"
#include "common/rng.hpp"

namespace uncerank::harness {

using pol::PolicyMode;

const std::vector<std::string>& known_variants() {
  static const std::vector<std::string> names{"unified", "epe_only", "bayes_only", "ensemble",
                                              "mcdropout", "random", "off"};
  return names;
}

Variant variant_by_name(const std::string& name) {
  if (name == "off") return {name, PolicyMode::Off, ChannelSource::None, ChannelSource::None};
  if (name == "unified") return {name, PolicyMode::SegmentAware, ChannelSource::Critic, ChannelSource::Bayes};
  if (name == "epe_only") return {name, PolicyMode::SegmentAware, ChannelSource::Critic, ChannelSource::None};
  if (name == "bayes_only") return {name, PolicyMode::SegmentAware, ChannelSource::None, ChannelSource::Bayes};
  if (name == "ensemble") return {name, PolicyMode::SegmentAware, ChannelSource::Ensemble, ChannelSource::None};
  if (name == "mcdropout") return {name, PolicyMode::SegmentAware, ChannelSource::McDropout, ChannelSource::None};
  // Pseudo-uncertainty is matched to the unified channels' calibration scores.
  if (name == "random") return {name, PolicyMode::RandomScore, ChannelSource::Critic, ChannelSource::Bayes};
  throw ConfigError("unknown variant '" + name + "'");
}

void ExperimentConfig::validate() const {
  world.validate();
  train.validate();
  critic.validate();
  bayes.validate();
  if (days < 2) throw ConfigError("days must be >= 2 (no trained checkpoint precedes day 1)");
  if (replications < 1) throw ConfigError("replications must be >= 1");
  if (!(q > 0.0 && q < 1.0)) throw ConfigError("calibration.q must be in (0, 1)");
  if (calibration_fraction <= 0.0 || calibration_fraction >= 1.0) {
    throw ConfigError("calibration.fraction must be in (0, 1)");
  }
  if (calibration_window < 1 || critic_window < 1 || bayes_window < 1) {
    throw ConfigError("training and calibration windows must be >= 1 day");
  }
  if (n_min < 1) throw ConfigError("calibration.n_min must be >= 1");
  if (dropout_rate < 0.0 || dropout_rate >= 1.0) throw ConfigError("dropout_rate must be in [0, 1)");
  if (mc_passes < 1) throw ConfigError("mc_passes must be >= 1");
  if (n_heads < 1) throw ConfigError("ensemble_heads must be >= 1");
  if (policy_start_day < 2) throw ConfigError("policy.start_day must be >= 2");
  const Variant v = variant_by_name(policy_mode);
  pol::PolicyConfig pc;
  pc.mode = v.mode;
  pc.D = D;
  pc.omega = omega;
  pc.validate();
  for (const auto& name : variants) variant_by_name(name);
}

ExperimentConfig ExperimentConfig::from_config(const KeyValueConfig& cfg) {
  ExperimentConfig e;
  e.source = cfg;
  e.world = sim::WorldConfig::from_config(cfg);
  e.train = rec::TrainConfig::from_config(cfg);
  e.critic = unc::CriticConfig::from_config(cfg);
  e.bayes = unc::BayesConfig::from_config(cfg);
  e.d_e = static_cast<std::size_t>(cfg.get_int("d_e", static_cast<std::int64_t>(e.d_e)));
  e.d_h = static_cast<std::size_t>(cfg.get_int("d_h", static_cast<std::int64_t>(e.d_h)));
  e.n_heads = static_cast<std::size_t>(cfg.get_int("ensemble_heads", static_cast<std::int64_t>(e.n_heads)));
  e.dropout_rate = cfg.get_double("dropout_rate", e.dropout_rate);
  e.mc_passes = static_cast<int>(cfg.get_int("mc_passes", e.mc_passes));
  e.q = cfg.get_double("calibration.q", e.q);
  e.calibration_fraction = cfg.get_double("calibration.fraction", e.calibration_fraction);
  e.calibration_window = static_cast<int>(cfg.get_int("calibration.window", e.calibration_window));
  e.n_min = static_cast<long>(cfg.get_int("calibration.n_min", e.n_min));
  e.critic_window = static_cast<int>(cfg.get_int("critic.window", e.critic_window));
  e.bayes_window = static_cast<int>(cfg.get_int("bayes.window", e.bayes_window));
  e.policy_mode = cfg.get_string("policy.mode", e.policy_mode);
  e.D = cfg.get_double("policy.D", e.D);
  e.omega = cfg.get_double("policy.omega", e.omega);
  e.filter_risky = cfg.get_bool("policy.filter_risky", e.filter_risky);
  e.policy_start_day = static_cast<int>(cfg.get_int("policy.start_day", e.policy_start_day));
  e.days = static_cast<int>(cfg.get_int("days"));
  e.replications = static_cast<int>(cfg.get_int("replications", e.replications));
  e.seed = static_cast<std::uint64_t>(cfg.get_int("seed"));
  if (cfg.has("variants")) e.variants = cfg.get_list("variants");
  e.out_dir = cfg.get_string("out_dir", e.out_dir.string());
  e.world.horizon_days = std::max(e.world.horizon_days, e.days);
  e.validate();
  return e;
}

std::string ExperimentConfig::run_id() const {
  KeyValueConfig c = source;
  c.set("seed", std::to_string(seed));
  std::string text;
  for (const auto& [k, v] : c.entries()) {
    if (k == "out_dir" || k == "variants" || k == "replications") continue;
    text += k + "=" + v + "\n";
  }
  return io::sha256_hex(text).substr(0, 16);
}

std::uint64_t world_seed(std::uint64_t root, int replication) {
  return substream_key(root, "world", static_cast<std::uint64_t>(replication));
}

std::uint64_t learner_seed(std::uint64_t root, int replication) {
  return substream_key(root, "learner", static_cast<std::uint64_t>(replication));
}

}  // namespace uncerank::harness
