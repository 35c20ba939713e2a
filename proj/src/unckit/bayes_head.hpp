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

// Empirical-Bayes Beta head over the frozen hidden representation h(x):
// u = w_u . h + b_u, v = w_v . h + b_v, fitted by maximising the summed
// Beta-Bernoulli marginal log-likelihood.

#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "common/config.hpp"
#include "recmodel/model.hpp"
#include "recmodel/train.hpp"
#include "unckit/beta.hpp"

namespace uncerank::unc {

struct BayesConfig {
  double lr = 0.05;
  int epochs = 2;
  int batch_size = 32;
  std::uint64_t seed = 0;

  void validate() const;
  static BayesConfig from_config(const KeyValueConfig& cfg);
};

BetaParams beta_params(const rec::BayesHead& head, std::span<const double> h);

/// Negative marginal log-likelihood of one outcome; accumulates
/// weight * d(-loglik)/d(head params) into `grad`.
double bayes_loss_grad(const rec::BayesHead& head, std::span<const double> h, int y, rec::BayesHead& grad,
                       double weight = 1.0);

/// Trains the Beta head of `ckpt` on examples, leaving every recommender
/// parameter untouched. Starts from ckpt.bayes. Throws ConfigError on
/// empty input.
rec::BayesHead train_bayes_head(const rec::Checkpoint& ckpt, std::span<const rec::Example> examples,
                                const BayesConfig& cfg);

/// Same, on precomputed hidden representations.
rec::BayesHead train_bayes_head(const rec::BayesHead& start, const std::vector<std::vector<double>>& hidden,
                                std::span<const int> y, const BayesConfig& cfg);

}  // namespace uncerank::unc
