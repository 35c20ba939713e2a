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

// Central finite differences shared by the unit and acceptance tests.

#pragma once

#include <algorithm>
#include <cmath>

namespace uncerank::testing {

inline constexpr double kFdStep = 1e-6;
// Below this absolute gap the difference quotient is at its rounding floor.
inline constexpr double kFdNoise = 1e-10;

/// (loss(p + h) - loss(p - h)) / 2h, restoring `p` afterwards.
template <typename Loss>
double central_difference(double& p, Loss&& loss, double h = kFdStep) {
  const double saved = p;
  p = saved + h;
  const double up = loss();
  p = saved - h;
  const double down = loss();
  p = saved;
  return (up - down) / (2.0 * h);
}

inline double relative_error(double analytic, double numeric) {
  const double scale = std::max(std::abs(analytic), std::abs(numeric));
  return scale > 0.0 ? std::abs(analytic - numeric) / scale : 0.0;
}

inline bool gradient_matches(double analytic, double numeric, double rel_tol = 1e-5) {
  return relative_error(analytic, numeric) <= rel_tol || std::abs(analytic - numeric) <= kFdNoise;
}

}  // namespace uncerank::testing
