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

// Daily incremental SGD for the recommender and prequential run driver.

#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "common/config.hpp"
#include "recmodel/model.hpp"

namespace uncerank::rec {

struct TrainConfig {
  double lr = 0.05;
  int epochs = 2;
  int batch_size = 32;
  double clip_norm = 5.0;  // <= 0 disables clipping
  std::uint64_t seed = 0;
  bool train_ensemble = true;

  void validate() const;
  static TrainConfig from_config(const KeyValueConfig& cfg);
};

struct Example {
  FeatureVector x;
  int y = 0;
  long long event_id = 0;
  int day = 0;
};

struct TrainResult {
  Checkpoint ckpt;
  bool empty_input = false;  // warning flag: nothing to train on
  double mean_loss = 0.0;    // over the last epoch
};

/// One day of training: returns ckpt_k from ckpt_{k-1}. The main head is
/// trained first (with inverted dropout on h when ckpt.dropout_rate > 0),
/// then each ensemble head on the frozen trunk with its own shuffle.
/// Throws ProtocolError when ckpt.day != day - 1 or an example is from
/// another day.
TrainResult train_day(const Checkpoint& prev, int day, std::span<const Example> examples, const TrainConfig& cfg);

/// Calibration reservation: exactly floor(fraction * n) examples, those
/// with the lowest hash of (seed, event id). Returns a mask aligned with
/// `event_ids`.
std::vector<std::uint8_t> calibration_split(std::span<const long long> event_ids, double fraction,
                                            std::uint64_t seed);

struct PrequentialPair {
  int day = 0;       // events of this day ...
  int ckpt_day = 0;  // ... are scored by this checkpoint (always day - 1)
};

struct TrainRun {
  Checkpoint initial;                      // ckpt_0
  std::vector<Checkpoint> checkpoints;     // ckpt_1 .. ckpt_K
  std::vector<std::vector<long long>> calibration_ids;  // per day, excluded from training
  std::vector<std::vector<long long>> training_ids;     // per day
  std::vector<PrequentialPair> prequential;             // days 2..K

  const Checkpoint& at(int day) const;  // day in [0, K]
};

/// Offline driver over fixed daily logs (days[0] is day 1). K < 2 is a
/// configuration error because no trained checkpoint would precede any
/// scored day.
TrainRun train_run(const Checkpoint& initial, const std::vector<std::vector<Example>>& days, const TrainConfig& cfg,
                   double calibration_fraction);

}  // namespace uncerank::rec
