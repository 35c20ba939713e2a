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

// Offline uncertainty-quality evaluation over prequential score rows.

#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "harness/learning.hpp"
#include "metrics/metrics.hpp"

namespace uncerank::harness {

/// Column-wise view of the scored events that carry every channel.
struct EvalInput {
  std::vector<double> u_point, u_prob, u_ensemble, u_mcdropout, e;
  std::vector<long> age_bucket;
};

/// Keeps rows whose four channels are all finite.
EvalInput eval_input(std::span<const ScoreRow> rows);

struct EstimatorRow {
  std::string estimator;  // critic, bayes, ensemble, mcdropout
  std::size_t n = 0;
  std::optional<double> pearson;   // empty when undefined (zero variance)
  std::optional<double> spearman;
  double aurc = 0.0;
  double base_risk = 0.0;
};

struct EvalSummary {
  std::vector<EstimatorRow> table1;
  std::vector<met::DecileRow> deciles_point, deciles_prob;
  met::AgeTrend age_point, age_prob;  // bucket indices in lo/hi are filled from `age_edges`
};

/// DataError when `in` is empty.
EvalSummary evaluate(const EvalInput& in, std::span<const long> age_edges);

}  // namespace uncerank::harness
