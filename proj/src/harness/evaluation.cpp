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

#include "harness/evaluation.hpp"

#include <cmath>

#include "common/errors.hpp"

namespace uncerank::harness {

EvalInput eval_input(std::span<const ScoreRow> rows) {
  EvalInput in;
  for (const auto& r : rows) {
    if (!std::isfinite(r.u_point) || !std::isfinite(r.u_prob) || !std::isfinite(r.u_ensemble) ||
        !std::isfinite(r.u_mcdropout)) {
      continue;
    }
    in.u_point.push_back(r.u_point);
    in.u_prob.push_back(r.u_prob);
    in.u_ensemble.push_back(r.u_ensemble);
    in.u_mcdropout.push_back(r.u_mcdropout);
    in.e.push_back(r.e);
    in.age_bucket.push_back(static_cast<long>(r.codes.age_bucket));
  }
  return in;
}

namespace {

EstimatorRow estimator_row(const std::string& name, std::span<const double> u, std::span<const double> e) {
  EstimatorRow row;
  row.estimator = name;
  row.n = u.size();
  try {
    row.pearson = met::pearson(u, e);
    row.spearman = met::spearman(u, e);
  } catch (const UndefinedCorrelationError&) {
    // A constant estimator has no defined correlation; leave both empty.
  }
  const auto rc = met::risk_coverage(u, e);
  row.aurc = rc.aurc;
  row.base_risk = rc.base_risk;
  return row;
}

met::AgeTrend bucketed(std::span<const double> u, std::span<const double> e, std::span<const long> bucket,
                       std::span<const long> age_edges) {
  std::vector<long> idx_edges;
  for (std::size_t b = 1; b <= age_edges.size(); ++b) idx_edges.push_back(static_cast<long>(b));
  met::AgeTrend t = met::age_trend(u, e, bucket, idx_edges);
  for (auto& r : t.rows) {
    const auto b = static_cast<std::size_t>(r.bucket);
    r.lo = b == 0 ? 0 : age_edges[b - 1];
    r.hi = b < age_edges.size() ? age_edges[b] : -1;
  }
  return t;
}

}  // namespace

EvalSummary evaluate(const EvalInput& in, std::span<const long> age_edges) {
  if (in.e.empty()) throw DataError("no scored events carry every uncertainty channel");
  EvalSummary s;
  s.table1.push_back(estimator_row("critic", in.u_point, in.e));
  s.table1.push_back(estimator_row("bayes", in.u_prob, in.e));
  s.table1.push_back(estimator_row("ensemble", in.u_ensemble, in.e));
  s.table1.push_back(estimator_row("mcdropout", in.u_mcdropout, in.e));
  s.deciles_point = met::decile_trend(in.u_point, in.e);
  s.deciles_prob = met::decile_trend(in.u_prob, in.e);
  s.age_point = bucketed(in.u_point, in.e, in.age_bucket, age_edges);
  s.age_prob = bucketed(in.u_prob, in.e, in.age_bucket, age_edges);
  return s;
}

}  // namespace uncerank::harness
