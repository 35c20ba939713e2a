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

// Bias / variance / noise decomposition of the expected squared error
// against a world whose true click probabilities are known.

#pragma once

#include <functional>
#include <span>
#include <vector>

namespace uncerank::unc {

struct EpeOracleRow {
  double mu = 0.0;
  double f_bar = 0.0;
  double bias2 = 0.0;
  double model_var = 0.0;
  double data_noise = 0.0;
  double epe_sum = 0.0;
};

/// Predictions of replication r at every grid point.
using RetrainFn = std::function<std::vector<double>(int r)>;

/// model_var is the variance over the R replications with divisor R, so
/// epe_sum is exactly E[(Y - f)^2] when the model is drawn uniformly from
/// the replications. Throws ConfigError when R < 2.
std::vector<EpeOracleRow> decompose_epe_oracle(std::span<const double> mu_true, const RetrainFn& retrain, int R);

}  // namespace uncerank::unc
