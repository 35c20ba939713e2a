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

// Error critic g(z) >= 0 over z = [x | h(x) | f(x)], fitted by MSE to the
// realized squared errors of the previous day's checkpoint.
//
//   a = relu(W1^T z + b1),  g = softplus(w2 . a + b2)

#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "common/config.hpp"
#include "recmodel/model.hpp"

namespace uncerank::unc {

struct CriticInput {
  rec::FeatureVector x;
  std::vector<double> h;
  double f = 0.5;

  std::size_t dim() const { return x.dim + h.size() + 1; }
  std::vector<double> dense() const;
};

CriticInput make_critic_input(const rec::FeatureVector& x, const rec::ForwardTrace& trace);

struct CriticModel {
  std::size_t d_x = 0;
  std::size_t d_h = 0;
  std::size_t hidden = 32;
  rec::Tensor W1, b1, w2, b2;

  std::size_t input_dim() const { return d_x + d_h + 1; }
  bool operator==(const CriticModel&) const = default;
};

struct CriticConfig {
  std::size_t hidden = 32;
  double lr = 0.05;
  int epochs = 3;
  int batch_size = 32;
  double clip_norm = 5.0;
  double init_output = 0.25;  // initial g, close to the Bernoulli error scale
  std::uint64_t seed = 0;

  void validate() const;
  static CriticConfig from_config(const KeyValueConfig& cfg);
};

CriticModel init_critic(std::size_t d_x, std::size_t d_h, const CriticConfig& cfg);

/// Pure. Throws ShapeError when z does not match the critic.
double u_point(const CriticModel& critic, const CriticInput& z);

/// Squared error (g(z) - e)^2; accumulates weight * gradient into `grad`.
double critic_loss_grad(const CriticModel& critic, const CriticInput& z, double e, CriticModel& grad,
                        double weight = 1.0);

struct CriticSample {
  const CriticInput* z = nullptr;
  double e = 0.0;
};

/// Seeded minibatch SGD on MSE. Starts from `warm` when given, otherwise
/// from a fresh initialisation. Throws ConfigError on empty input.
CriticModel train_critic(std::span<const CriticSample> samples, const CriticConfig& cfg,
                         const CriticModel* warm = nullptr);

}  // namespace uncerank::unc
