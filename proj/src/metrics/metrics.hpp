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

// Uncertainty-quality metrics: correlations, selective-prediction risk
// and binned trend tables.

#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace uncerank::met {

/// Product-moment correlation. UndefinedCorrelationError on zero variance,
/// ShapeError on length mismatch, DataError on empty input.
double pearson(std::span<const double> u, std::span<const double> e);

/// 1-based ranks; tied values share the mean of their rank span.
std::vector<double> average_ranks(std::span<const double> v);

/// Pearson on average ranks.
double spearman(std::span<const double> u, std::span<const double> e);

struct RiskCoveragePoint {
  double coverage = 0.0;
  double risk = 0.0;
};

struct RiskCoverage {
  std::vector<RiskCoveragePoint> curve;
  double aurc = 0.0;
  double base_risk = 0.0;
};

/// Items retained in ascending-u order (ties by index); risk_k is the mean
/// error of the k retained items and aurc the mean of risk_1..risk_n.
RiskCoverage risk_coverage(std::span<const double> u, std::span<const double> e);

struct DecileRow {
  int bin = 0;
  std::size_t n = 0;
  double mean_u = 0.0;
  double mse = 0.0;
};

/// Ten equal-count bins by u rank (sizes differ by at most one).
std::vector<DecileRow> decile_trend(std::span<const double> u, std::span<const double> e);

struct AgeRow {
  int bucket = 0;
  long lo = 0;   // inclusive lower edge in minutes
  long hi = -1;  // exclusive upper edge; -1 for the open last bucket
  std::size_t n = 0;
  double mean_u = 0.0;
  double rmse = 0.0;
};

struct AgeTrend {
  std::vector<AgeRow> rows;          // non-empty buckets in age order
  std::vector<int> omitted_buckets;  // empty buckets, flagged
};

/// Buckets by upper-exclusive `edges`; RMSE = sqrt(mean e) per bucket.
AgeTrend age_trend(std::span<const double> u, std::span<const double> e, std::span<const long> age_min,
                   std::span<const long> edges);

struct Interval {
  double mean = 0.0;
  double lo = 0.0;
  double hi = 0.0;
  bool excludes_zero() const { return lo > 0.0 || hi < 0.0; }
  bool contains_zero() const { return !excludes_zero(); }
};

/// Percentile interval over replications (linear interpolation between
/// order statistics), e.g. level 0.95 gives the 2.5% / 97.5% points.
Interval percentile_interval(std::span<const double> values, double level = 0.95);

/// Percentile bootstrap interval for the mean of `values`: `resamples`
/// seeded resamples with replacement, then percentile_interval of their
/// means. `mean` is the plain sample mean.
Interval bootstrap_mean_interval(std::span<const double> values, double level = 0.95, int resamples = 2000,
                                 std::uint64_t seed = 0);

}  // namespace uncerank::met
