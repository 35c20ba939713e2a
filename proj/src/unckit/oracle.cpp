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

#include "unckit/oracle.hpp"

#include "common/errors.hpp"

namespace uncerank::unc {

std::vector<EpeOracleRow> decompose_epe_oracle(std::span<const double> mu_true, const RetrainFn& retrain, int R) {
  if (R < 2) throw ConfigError("EPE oracle needs R >= 2 replications, got " + std::to_string(R));
  const std::size_t n = mu_true.size();
  std::vector<std::vector<double>> preds;
  preds.reserve(static_cast<std::size_t>(R));
  for (int r = 0; r < R; ++r) {
    preds.push_back(retrain(r));
    if (preds.back().size() != n) throw ShapeError("replication returned the wrong number of predictions");
  }
  std::vector<EpeOracleRow> rows(n);
  for (std::size_t i = 0; i < n; ++i) {
    EpeOracleRow& row = rows[i];
    row.mu = mu_true[i];
    for (const auto& p : preds) row.f_bar += p[i];
    row.f_bar /= R;
    for (const auto& p : preds) row.model_var += (p[i] - row.f_bar) * (p[i] - row.f_bar);
    row.model_var /= R;
    row.bias2 = (row.f_bar - row.mu) * (row.f_bar - row.mu);
    row.data_noise = row.mu * (1.0 - row.mu);
    row.epe_sum = row.bias2 + row.model_var + row.data_noise;
  }
  return rows;
}

}  // namespace uncerank::unc
