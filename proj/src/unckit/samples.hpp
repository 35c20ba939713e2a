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

// Realized-error samples and the two baseline uncertainty channels.

#pragma once

#include <span>
#include <vector>

#include "recmodel/model.hpp"
#include "recmodel/train.hpp"
#include "unckit/critic.hpp"

namespace uncerank::unc {

struct RealizedErrorSample {
  int day = 0;
  long long event_id = 0;
  CriticInput z;  // built from the day - 1 checkpoint
  double e = 0.0;  // (y - f)^2
  double f = 0.5;
  int y = 0;
};

/// Squared error of a binary outcome.
inline double squared_error(double f, int y) { return (y - f) * (y - f); }

/// Scores day-`day` examples with `ckpt`, which must be the day - 1
/// checkpoint; anything else is a ProtocolError.
std::vector<RealizedErrorSample> collect_error_samples(const rec::Checkpoint& ckpt, int day,
                                                       std::span<const rec::Example> examples);

/// Population variance (divides by n).
double population_variance(std::span<const double> v);

/// Variance across ensemble head scores; ProtocolError when absent.
double u_ensemble(const rec::ForwardTrace& trace);
/// Variance across MC-dropout pass scores; ProtocolError when absent.
double u_mcdropout(const rec::ForwardTrace& trace);

}  // namespace uncerank::unc
