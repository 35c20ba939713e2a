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

#include "unckit/beta.hpp"

#include <cmath>

#include "recmodel/model.hpp"

namespace uncerank::unc {

BetaParams BetaParams::from_logits(double u, double v) {
  return {1.0 + rec::softplus(u), 1.0 + rec::softplus(v)};
}

double u_prob(const BetaParams& bp) {
  const double s = bp.alpha + bp.beta;
  return bp.alpha * bp.beta / (s * s * (s + 1.0));
}

VarianceDecomposition variance_decomposition(const BetaParams& bp) {
  const double s = bp.alpha + bp.beta;
  const double p = bp.alpha / s;
  VarianceDecomposition d;
  d.aleatoric = bp.alpha * bp.beta / (s * (s + 1.0));
  d.epistemic = u_prob(bp);
  d.total = p * (1.0 - p);
  return d;
}

double bayes_marginal_loglik(const BetaParams& bp, int y) {
  const double s = bp.alpha + bp.beta;
  return y ? std::log(bp.alpha / s) : std::log(bp.beta / s);
}

LogitGrad marginal_loglik_grad(double u, double v, int y) {
  const BetaParams bp = BetaParams::from_logits(u, v);
  const double inv_s = 1.0 / (bp.alpha + bp.beta);
  const double d_alpha = (y ? 1.0 / bp.alpha : 0.0) - inv_s;
  const double d_beta = (y ? 0.0 : 1.0 / bp.beta) - inv_s;
  // d softplus(z) / dz = sigmoid(z)
  return {d_alpha * rec::sigmoid(u), d_beta * rec::sigmoid(v)};
}

}  // namespace uncerank::unc
