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

// Beta-Bernoulli head algebra. The latent click probability is
// theta ~ Beta(alpha, beta) with alpha = 1 + softplus(u), beta = 1 + softplus(v).

#pragma once

namespace uncerank::unc {

struct BetaParams {
  double alpha = 2.0;
  double beta = 2.0;

  static BetaParams from_logits(double u, double v);
  double mean() const { return alpha / (alpha + beta); }
  double concentration() const { return alpha + beta; }
};

/// Prior variance alpha beta / ((alpha + beta)^2 (alpha + beta + 1)).
double u_prob(const BetaParams& bp);

struct VarianceDecomposition {
  double aleatoric = 0.0;  // E[theta (1 - theta)]
  double epistemic = 0.0;  // Var[theta]
  double total = 0.0;      // p (1 - p), p = E[theta]
};

VarianceDecomposition variance_decomposition(const BetaParams& bp);

/// log of the integral of theta^y (1 - theta)^(1 - y) against Beta(alpha, beta).
double bayes_marginal_loglik(const BetaParams& bp, int y);

struct LogitGrad {
  double du = 0.0;
  double dv = 0.0;
};

/// Gradient of bayes_marginal_loglik with respect to the logits (u, v).
LogitGrad marginal_loglik_grad(double u, double v, int y);

}  // namespace uncerank::unc
