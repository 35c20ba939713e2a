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

#include "unckit/samples.hpp"

#include "common/errors.hpp"

namespace uncerank::unc {

std::vector<RealizedErrorSample> collect_error_samples(const rec::Checkpoint& ckpt, int day,
                                                       std::span<const rec::Example> examples) {
  if (ckpt.day != day - 1) {
    throw ProtocolError("day " + std::to_string(day) + " errors must come from the day " + std::to_string(day - 1) +
                        " checkpoint, got day " + std::to_string(ckpt.day));
  }
  std::vector<RealizedErrorSample> out;
  out.reserve(examples.size());
  for (const auto& ex : examples) {
    if (ex.day != day) {
      throw ProtocolError("event " + std::to_string(ex.event_id) + " is from day " + std::to_string(ex.day) +
                          ", not day " + std::to_string(day));
    }
    const rec::ForwardTrace tr = rec::forward(ckpt, ex.x);
    RealizedErrorSample s;
    s.day = day;
    s.event_id = ex.event_id;
    s.z = make_critic_input(ex.x, tr);
    s.f = tr.score;
    s.y = ex.y;
    s.e = squared_error(tr.score, ex.y);
    out.push_back(std::move(s));
  }
  return out;
}

double population_variance(std::span<const double> v) {
  if (v.empty()) return 0.0;
  double mean = 0.0;
  for (double x : v) mean += x;
  mean /= static_cast<double>(v.size());
  double ss = 0.0;
  for (double x : v) ss += (x - mean) * (x - mean);
  return ss / static_cast<double>(v.size());
}

double u_ensemble(const rec::ForwardTrace& trace) {
  if (!trace.head_scores || trace.head_scores->empty()) throw ProtocolError("trace has no ensemble head scores");
  return population_variance(*trace.head_scores);
}

double u_mcdropout(const rec::ForwardTrace& trace) {
  if (!trace.pass_scores || trace.pass_scores->empty()) throw ProtocolError("trace has no dropout pass scores");
  return population_variance(*trace.pass_scores);
}

}  // namespace uncerank::unc
