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

#include "metrics/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "common/errors.hpp"
#include "common/rng.hpp"

namespace uncerank::met {

namespace {

void check_pair(std::span<const double> u, std::span<const double> e) {
  if (u.size() != e.size()) throw ShapeError("metric inputs differ in length");
  if (u.empty()) throw DataError("metric of an empty sample");
}

}  // namespace

double pearson(std::span<const double> u, std::span<const double> e) {
  check_pair(u, e);
  const double n = static_cast<double>(u.size());
  const double mu = std::accumulate(u.begin(), u.end(), 0.0) / n;
  const double me = std::accumulate(e.begin(), e.end(), 0.0) / n;
  double suu = 0.0, see = 0.0, sue = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    const double a = u[i] - mu, b = e[i] - me;
    suu += a * a;
    see += b * b;
    sue += a * b;
  }
  if (suu == 0.0 || see == 0.0) throw UndefinedCorrelationError("correlation undefined: zero variance input");
  return std::clamp(sue / std::sqrt(suu * see), -1.0, 1.0);
}

std::vector<double> average_ranks(std::span<const double> v) {
  std::vector<std::size_t> idx(v.size());
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return v[a] < v[b]; });
  std::vector<double> r(v.size());
  for (std::size_t i = 0; i < idx.size();) {
    std::size_t j = i;
    while (j + 1 < idx.size() && v[idx[j + 1]] == v[idx[i]]) ++j;
    const double avg = 0.5 * static_cast<double>(i + j) + 1.0;
    for (std::size_t k = i; k <= j; ++k) r[idx[k]] = avg;
    i = j + 1;
  }
  return r;
}

double spearman(std::span<const double> u, std::span<const double> e) {
  check_pair(u, e);
  const auto ru = average_ranks(u);
  const auto re = average_ranks(e);
  return pearson(ru, re);
}

RiskCoverage risk_coverage(std::span<const double> u, std::span<const double> e) {
  check_pair(u, e);
  std::vector<std::size_t> idx(u.size());
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return u[a] < u[b]; });
  RiskCoverage rc;
  rc.curve.reserve(u.size());
  const double n = static_cast<double>(u.size());
  double cum = 0.0, sum_risk = 0.0;
  for (std::size_t k = 0; k < idx.size(); ++k) {
    cum += e[idx[k]];
    const double risk = cum / static_cast<double>(k + 1);
    rc.curve.push_back({static_cast<double>(k + 1) / n, risk});
    sum_risk += risk;
  }
  rc.aurc = sum_risk / n;
  rc.base_risk = cum / n;
  return rc;
}

std::vector<DecileRow> decile_trend(std::span<const double> u, std::span<const double> e) {
  if (u.size() != e.size()) throw ShapeError("metric inputs differ in length");
  if (u.size() < 10) throw DataError("decile trend needs at least 10 samples");
  std::vector<std::size_t> idx(u.size());
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return u[a] < u[b]; });
  const std::size_t n = u.size();
  std::vector<DecileRow> rows(10);
  for (std::size_t b = 0; b < 10; ++b) {
    const std::size_t lo = b * n / 10, hi = (b + 1) * n / 10;
    DecileRow& r = rows[b];
    r.bin = static_cast<int>(b);
    r.n = hi - lo;
    for (std::size_t k = lo; k < hi; ++k) {
      r.mean_u += u[idx[k]];
      r.mse += e[idx[k]];
    }
    r.mean_u /= static_cast<double>(r.n);
    r.mse /= static_cast<double>(r.n);
  }
  return rows;
}

AgeTrend age_trend(std::span<const double> u, std::span<const double> e, std::span<const long> age_min,
                   std::span<const long> edges) {
  if (u.size() != e.size() || u.size() != age_min.size()) throw ShapeError("age trend inputs differ in length");
  if (!std::is_sorted(edges.begin(), edges.end())) throw ConfigError("age bucket edges must be ascending");
  const std::size_t nb = edges.size() + 1;
  std::vector<AgeRow> acc(nb);
  for (std::size_t i = 0; i < u.size(); ++i) {
    const auto b = static_cast<std::size_t>(std::upper_bound(edges.begin(), edges.end(), age_min[i]) - edges.begin());
    acc[b].n++;
    acc[b].mean_u += u[i];
    acc[b].rmse += e[i];
  }
  AgeTrend out;
  for (std::size_t b = 0; b < nb; ++b) {
    AgeRow r = acc[b];
    r.bucket = static_cast<int>(b);
    r.lo = b == 0 ? 0 : edges[b - 1];
    r.hi = b < edges.size() ? edges[b] : -1;
    if (r.n == 0) {
      out.omitted_buckets.push_back(r.bucket);
      continue;
    }
    r.mean_u /= static_cast<double>(r.n);
    r.rmse = std::sqrt(r.rmse / static_cast<double>(r.n));
    out.rows.push_back(r);
  }
  return out;
}

Interval percentile_interval(std::span<const double> values, double level) {
  if (values.empty()) throw DataError("interval of an empty sample");
  if (!(level > 0.0 && level < 1.0)) throw ConfigError("interval level must be in (0, 1)");
  std::vector<double> s(values.begin(), values.end());
  std::sort(s.begin(), s.end());
  auto at = [&](double p) {
    const double pos = p * static_cast<double>(s.size() - 1);
    const auto i = static_cast<std::size_t>(std::floor(pos));
    const double frac = pos - static_cast<double>(i);
    return i + 1 < s.size() ? s[i] + frac * (s[i + 1] - s[i]) : s[i];
  };
  Interval iv;
  iv.mean = std::accumulate(s.begin(), s.end(), 0.0) / static_cast<double>(s.size());
  iv.lo = at(0.5 * (1.0 - level));
  iv.hi = at(1.0 - 0.5 * (1.0 - level));
  return iv;
}

Interval bootstrap_mean_interval(std::span<const double> values, double level, int resamples, std::uint64_t seed) {
  if (values.empty()) throw DataError("interval of an empty sample");
  if (resamples < 1) throw ConfigError("bootstrap needs at least one resample");
  auto rng = CounterRng::substream(seed, "metrics/bootstrap", values.size());
  std::vector<double> means(static_cast<std::size_t>(resamples));
  for (auto& m : means) {
    double s = 0.0;
    for (std::size_t i = 0; i < values.size(); ++i) s += values[rng.below(values.size())];
    m = s / static_cast<double>(values.size());
  }
  Interval iv = percentile_interval(means, level);
  iv.mean = std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(values.size());
  return iv;
}

}  // namespace uncerank::met
