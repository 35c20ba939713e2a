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

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "common/errors.hpp"
#include "common/rng.hpp"
#include "doctest.h"
#include "metrics/engagement.hpp"
#include "metrics/metrics.hpp"

using namespace uncerank;
using namespace uncerank::met;

namespace {

std::vector<double> normals(std::uint64_t seed, std::size_t n) {
  CounterRng rng(seed);
  std::vector<double> v(n);
  for (auto& x : v) x = rng.normal();
  return v;
}

double direct_pearson(const std::vector<double>& a, const std::vector<double>& b) {
  const double n = static_cast<double>(a.size());
  const double ma = std::accumulate(a.begin(), a.end(), 0.0) / n;
  const double mb = std::accumulate(b.begin(), b.end(), 0.0) / n;
  double cov = 0.0, va = 0.0, vb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    cov += (a[i] - ma) * (b[i] - mb);
    va += (a[i] - ma) * (a[i] - ma);
    vb += (b[i] - mb) * (b[i] - mb);
  }
  return cov / std::sqrt(va * vb);
}

// Rank by counting: 1 + (#smaller) + (#equal others) / 2.
std::vector<double> counting_ranks(const std::vector<double>& v) {
  std::vector<double> r(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    double less = 0.0, equal = 0.0;
    for (std::size_t j = 0; j < v.size(); ++j) {
      if (v[j] < v[i]) less += 1.0;
      if (j != i && v[j] == v[i]) equal += 1.0;
    }
    r[i] = 1.0 + less + equal / 2.0;
  }
  return r;
}

// AURC straight from the prefix definition for a given retention order.
double prefix_aurc(const std::vector<double>& e, const std::vector<std::size_t>& order) {
  double sum = 0.0, acc = 0.0;
  for (std::size_t k = 0; k < order.size(); ++k) {
    acc += e[order[k]];
    sum += acc / static_cast<double>(k + 1);
  }
  return sum / static_cast<double>(order.size());
}

sim::ImpressionEvent watch(int user, int day, int tag, double minutes, bool valuable = false) {
  sim::ImpressionEvent e;
  e.user_id = user;
  e.day = day;
  e.category_tag = tag;
  e.watch_minutes = minutes;
  e.clicked = minutes > 0.0;
  e.valuable = valuable;
  return e;
}

}  // namespace

TEST_SUITE("metrics") {

TEST_CASE("pearson") {
  const std::vector<double> e{0.1, 0.5, 0.2, 0.9};
  std::vector<double> neg(e.size());
  std::transform(e.begin(), e.end(), neg.begin(), [](double x) { return -x; });
  CHECK(pearson(e, e) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(pearson(neg, e) == doctest::Approx(-1.0).epsilon(1e-15));
  for (std::uint64_t s = 0; s < 20; ++s) {
    const auto a = normals(2 * s, 500), b = normals(2 * s + 1, 500);
    CHECK(std::abs(pearson(a, b) - direct_pearson(a, b)) <= 1e-12);
  }
  const std::vector<double> flat(4, 1.0);
  CHECK_THROWS_AS(pearson(flat, e), UndefinedCorrelationError);
  CHECK_THROWS_AS(pearson(e, std::vector<double>{1.0, 2.0}), ShapeError);
  CHECK_THROWS_AS(pearson(std::vector<double>{}, std::vector<double>{}), DataError);
}

TEST_CASE("spearman with average ranks") {
  const std::vector<double> a{1, 2, 3}, up{10, 20, 30}, down{30, 20, 10};
  CHECK(spearman(a, up) == doctest::Approx(1.0));
  CHECK(spearman(a, down) == doctest::Approx(-1.0));
  const std::vector<double> t1{1, 1, 2}, t2{5, 5, 9};
  CHECK(average_ranks(t1) == std::vector<double>{1.5, 1.5, 3.0});
  CHECK(spearman(t1, t2) == doctest::Approx(1.0));

  CounterRng rng(4);
  for (int trial = 0; trial < 30; ++trial) {
    std::vector<double> u(60), e(60);
    for (auto& x : u) x = static_cast<double>(rng.below(10));
    for (auto& x : e) x = static_cast<double>(rng.below(7));
    CHECK(average_ranks(u) == counting_ranks(u));
    CHECK(spearman(u, e) == doctest::Approx(direct_pearson(counting_ranks(u), counting_ranks(e))).epsilon(1e-12));
    std::vector<double> mono(u.size());
    std::transform(u.begin(), u.end(), mono.begin(), [](double x) { return std::exp(3.0 * x) - 7.0; });
    CHECK(spearman(mono, e) == doctest::Approx(spearman(u, e)).epsilon(1e-12));
    const double rho = spearman(u, e);
    CHECK(rho >= -1.0);
    CHECK(rho <= 1.0);
  }
  CHECK_THROWS_AS(spearman(std::vector<double>(5, 2.0), up), ShapeError);
  CHECK_THROWS_AS(spearman(std::vector<double>(3, 2.0), up), UndefinedCorrelationError);
}

TEST_CASE("risk-coverage on a small case") {
  const std::vector<double> e{0, 1, 2}, u{0.1, 0.2, 0.3};
  const auto rc = risk_coverage(u, e);
  REQUIRE(rc.curve.size() == 3);
  CHECK(rc.curve[0].risk == 0.0);
  CHECK(rc.curve[1].risk == 0.5);
  CHECK(rc.curve[2].risk == 1.0);
  CHECK(rc.curve[0].coverage == doctest::Approx(1.0 / 3.0));
  CHECK(rc.curve[2].coverage == 1.0);
  CHECK(rc.aurc == doctest::Approx(0.5));
  CHECK(rc.base_risk == 1.0);
  const std::vector<double> flat(3, 0.4);
  CHECK(risk_coverage(flat, e).aurc == rc.aurc);
  CHECK_THROWS_AS(risk_coverage(std::vector<double>{}, std::vector<double>{}), DataError);
  CHECK_THROWS_AS(risk_coverage(u, std::vector<double>{1.0}), ShapeError);
}

TEST_CASE("oracle ordering minimises AURC over every permutation") {
  CounterRng rng(5);
  for (std::size_t n = 1; n <= 6; ++n) {
    for (int trial = 0; trial < 5; ++trial) {
      std::vector<double> e(n);
      for (auto& x : e) x = static_cast<double>(rng.below(5)) * 0.25;
      const double oracle = risk_coverage(e, e).aurc;
      std::vector<std::size_t> perm(n);
      std::iota(perm.begin(), perm.end(), std::size_t{0});
      double best = 1e300;
      do {
        std::vector<double> u(n);
        for (std::size_t k = 0; k < n; ++k) u[perm[k]] = static_cast<double>(k);
        const double a = risk_coverage(u, e).aurc;
        CHECK(a == doctest::Approx(prefix_aurc(e, perm)).epsilon(1e-12));
        CHECK(oracle <= a + 1e-12);
        best = std::min(best, a);
      } while (std::next_permutation(perm.begin(), perm.end()));
      CHECK(oracle == doctest::Approx(best).epsilon(1e-12));
    }
  }
}

TEST_CASE("random orderings average to the base risk") {
  CounterRng rng(6);
  std::vector<double> e(400);
  for (auto& x : e) x = rng.uniform() * rng.uniform();
  std::vector<double> a(200);
  for (auto& x : a) {
    std::vector<double> u(e.size());
    for (auto& v : u) v = rng.uniform();
    x = risk_coverage(u, e).aurc;
  }
  const double m = std::accumulate(a.begin(), a.end(), 0.0) / 200.0;
  double ss = 0.0;
  for (double x : a) ss += (x - m) * (x - m);
  const double se = std::sqrt(ss / 199.0 / 200.0);
  const double base = std::accumulate(e.begin(), e.end(), 0.0) / 400.0;
  CHECK(std::abs(m - base) <= 3.0 * se);
}

TEST_CASE("decile bins") {
  std::vector<double> v(100);
  std::iota(v.begin(), v.end(), 1.0);
  const auto d = decile_trend(v, v);
  REQUIRE(d.size() == 10);
  for (std::size_t i = 1; i < d.size(); ++i) {
    CHECK(d[i].mse > d[i - 1].mse);
    CHECK(d[i].mean_u > d[i - 1].mean_u);
  }
  const auto odd = decile_trend(normals(1, 1234), normals(2, 1234));
  std::size_t lo = 1u << 30, hi = 0, total = 0;
  for (const auto& r : odd) {
    lo = std::min(lo, r.n);
    hi = std::max(hi, r.n);
    total += r.n;
  }
  CHECK(hi - lo <= 1);
  CHECK(total == 1234);
  CHECK_THROWS_AS(decile_trend(std::vector<double>(9, 1.0), std::vector<double>(9, 1.0)), DataError);
}

TEST_CASE("independent u gives no decile trend") {
  // A 10-point rank correlation under the null has sd 1/3, so single seeds
  // exceed 0.5 often; the bound applies to the average over seeds.
  double sum = 0.0;
  for (std::uint64_t s = 0; s < 20; ++s) {
    const auto u = normals(100 + s, 10000);
    auto e = normals(200 + s, 10000);
    for (auto& x : e) x *= x;
    const auto d = decile_trend(u, e);
    std::vector<double> idx, mse;
    for (const auto& r : d) {
      idx.push_back(r.bin);
      mse.push_back(r.mse);
    }
    sum += spearman(idx, mse);
  }
  CHECK(std::abs(sum / 20.0) < 0.5);
}

TEST_CASE("age buckets") {
  const std::vector<double> u{0.3, 0.2, 0.1, 0.1}, e{0.25, 0.09, 0.04, 0.0};
  const std::vector<long> age{1, 30, 200, 400};
  const std::vector<long> none;
  const auto one = age_trend(u, e, age, none);
  REQUIRE(one.rows.size() == 1);
  CHECK(one.rows[0].mean_u == doctest::Approx(0.175));
  CHECK(one.rows[0].rmse == doctest::Approx(std::sqrt(0.095)));

  const std::vector<long> edges{10, 60, 120, 300};
  const auto t = age_trend(u, e, age, edges);
  REQUIRE(t.rows.size() == 4);
  CHECK(t.omitted_buckets == std::vector<int>{2});
  CHECK(t.rows[0].rmse == doctest::Approx(0.5));
  CHECK(t.rows[1].rmse == doctest::Approx(0.3));
  CHECK(t.rows[2].bucket == 3);
  CHECK(t.rows[2].lo == 120);
  CHECK(t.rows[2].hi == 300);
  CHECK(t.rows[3].hi == -1);
  for (const auto& r : t.rows) CHECK(r.rmse * r.rmse == doctest::Approx(e[static_cast<std::size_t>(&r - &t.rows[0])]));
  const std::vector<long> bad{60, 10};
  CHECK_THROWS_AS(age_trend(u, e, age, bad), ConfigError);
}

TEST_CASE("percentile and bootstrap intervals") {
  std::vector<double> v(101);
  std::iota(v.begin(), v.end(), 1.0);
  const auto iv = percentile_interval(v, 0.9);
  CHECK(iv.lo == doctest::Approx(6.0));
  CHECK(iv.hi == doctest::Approx(96.0));
  CHECK(iv.mean == doctest::Approx(51.0));
  CHECK(iv.excludes_zero());
  const std::vector<double> two{-1.0, 3.0};
  CHECK(percentile_interval(two, 0.5).lo == doctest::Approx(0.0));
  CHECK(percentile_interval(two, 0.5).contains_zero());
  CHECK_THROWS_AS(percentile_interval(std::vector<double>{}, 0.9), DataError);

  auto x = normals(9, 400);
  for (auto& s : x) s += 0.5;
  const auto b = bootstrap_mean_interval(x, 0.95, 4000, 3);
  CHECK(b.mean == doctest::Approx(std::accumulate(x.begin(), x.end(), 0.0) / 400.0));
  CHECK(b.lo < b.mean);
  CHECK(b.hi > b.mean);
  // Normal-theory width 2 * 1.96 * sd / sqrt(n), with sd near 1.
  CHECK(std::abs((b.hi - b.lo) - 2.0 * 1.96 / 20.0) < 0.03);
  const auto again = bootstrap_mean_interval(x, 0.95, 4000, 3);
  CHECK(again.lo == b.lo);
  CHECK(again.hi == b.hi);
}

TEST_CASE("engagement proxies") {
  std::vector<sim::ImpressionEvent> ev;
  for (int day = 1; day <= 14; ++day) {
    for (int user : {1, 2}) {
      for (int tag : {4, 5, 6}) ev.push_back(watch(user, day, tag, tag == 4 ? 9.0 : 0.5, true));
    }
    ev.push_back(watch(99, day, 7, 100.0));
  }
  EngagementScope scope{{1, 2, 3}, 8, 14};
  const auto r = engagement_report(ev, scope);
  CHECK(*r.vwr == 1.0);
  CHECK(*r.show_tag_per_user == 3.0);
  CHECK(*r.top1_tag_uv_ratio == 1.0);
  CHECK(*r.live_watch_time == doctest::Approx(7 * 2 * 10.0));
  // user 3 never watches and still counts in the population.
  CHECK(*r.hlt7 == doctest::Approx(2 * 7 * 10.0 / (7.0 * 3.0)));

  const std::vector<sim::ImpressionEvent> split{watch(1, 1, 0, 9.0), watch(1, 1, 1, 1.0), watch(2, 1, 0, 8.0),
                                                watch(2, 1, 1, 2.0, true)};
  const auto s = engagement_report(split, {{1, 2}, 1, 1});
  CHECK(*s.top1_tag_uv_ratio == 0.5);
  CHECK(*s.vwr == doctest::Approx(0.1));
  CHECK_FALSE(s.hlt7.has_value());

  const std::vector<sim::ImpressionEvent> idle{watch(1, 1, 0, 0.0)};
  const auto z = engagement_report(idle, {{1}, 1, 1});
  CHECK_FALSE(z.vwr.has_value());
  CHECK(fmt_metric(z.vwr) == "NA");
  CHECK(*z.show_tag_per_user == 1.0);
  CHECK_THROWS_AS(engagement_report(idle, {{1}, 3, 2}), ConfigError);
}

TEST_CASE("lifts and HLT efficiency") {
  EngagementReport arm, ctrl;
  arm.hlt7 = 1.1;
  ctrl.hlt7 = 1.0;
  arm.live_watch_time = 90.0;
  ctrl.live_watch_time = 100.0;
  CHECK(*hlt_efficiency(arm, ctrl) == doctest::Approx(0.01));
  arm.live_watch_time = 100.0;
  CHECK_FALSE(hlt_efficiency(arm, ctrl).has_value());
  CHECK(*relative_lift(1.1, 1.0) == doctest::Approx(0.1));
  CHECK(*relative_lift(-0.9, -1.0) == doctest::Approx(0.1));
  CHECK_FALSE(relative_lift(1.0, 0.0).has_value());
  CHECK_FALSE(relative_lift(std::nullopt, 1.0).has_value());
}

}  // TEST_SUITE
