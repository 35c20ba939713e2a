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
#include <vector>

#include "common/errors.hpp"
#include "common/rng.hpp"
#include "doctest.h"
#include "policy/policy.hpp"

using namespace uncerank;
using namespace uncerank::pol;

namespace {

cal::CalibrationThresholds taus(double point, double prob) {
  cal::CalibrationThresholds t;
  t.tau_point = point;
  t.tau_prob = prob;
  return t;
}

PolicyConfig config(PolicyMode mode, double D = 0.3, double omega = 1.0) {
  PolicyConfig c;
  c.mode = mode;
  c.D = D;
  c.omega = omega;
  c.thresholds = taus(0.5, 0.5);
  return c;
}

RankContext ctx(sim::Segment s, int request = 0) {
  RankContext c;
  c.day = 4;
  c.user_id = 17;
  c.request_index = request;
  c.segment = s;
  return c;
}

std::vector<ScoredCandidate> random_candidates(CounterRng& rng, int n) {
  std::vector<ScoredCandidate> v(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    auto& c = v[static_cast<std::size_t>(i)];
    c.user_id = 17;
    c.item_id = 100 + 7 * i;
    c.r = rng.uniform();
    c.u_point = rng.uniform();
    c.u_prob = rng.uniform();
  }
  return v;
}

// Each item's slot is the number of candidates that beat it.
std::vector<int> order_by_counting(const std::vector<double>& score, const std::vector<int>& ids) {
  std::vector<int> out(ids.size());
  for (std::size_t i = 0; i < ids.size(); ++i) {
    std::size_t slot = 0;
    for (std::size_t j = 0; j < ids.size(); ++j) {
      if (score[j] > score[i] || (score[j] == score[i] && ids[j] < ids[i])) ++slot;
    }
    out[slot] = ids[i];
  }
  return out;
}

std::size_t position_of(const std::vector<int>& ids, int item) {
  return static_cast<std::size_t>(std::find(ids.begin(), ids.end(), item) - ids.begin());
}

}  // namespace

TEST_SUITE("policy") {

TEST_CASE("risky flag is the strict OR rule") {
  const auto t = taus(0.4, 0.2);
  CHECK(flag_risky(0.5, 0.1, t));
  CHECK(flag_risky(0.1, 0.3, t));
  CHECK_FALSE(flag_risky(0.4, 0.2, t));
  CHECK_FALSE(flag_risky(0.0, 0.0, t));
  CHECK_FALSE(flag_risky(0.5, 0.1, t, false, true));
  CHECK_FALSE(flag_risky(0.1, 0.3, t, true, false));
}

TEST_CASE("LAU and HAU scores") {
  CHECK(score_lau(0.9, true, 0.3) == doctest::Approx(0.6).epsilon(1e-15));
  CHECK(score_lau(0.9, false, 0.3) == 0.9);
  CHECK_THROWS_AS(score_lau(0.9, true, 0.0), ConfigError);
  CHECK(score_hau(0.5, 0.2, 0.4, 1.0) == doctest::Approx(0.9).epsilon(1e-15));
  CHECK(score_hau(0.5, 0.25, 0.25, 2.0) == 1.0);
  CHECK_THROWS_AS(score_hau(0.5, 0.2, 0.4, 0.0), ConfigError);
}

TEST_CASE("modes parse and validate") {
  for (auto m : {PolicyMode::Off, PolicyMode::DeboostLAU, PolicyMode::UcbHAU, PolicyMode::SegmentAware,
                 PolicyMode::RandomScore}) {
    CHECK(parse_mode(to_string(m)) == m);
  }
  CHECK_THROWS_AS(parse_mode("greedy"), ConfigError);
  CHECK_THROWS_AS(config(PolicyMode::SegmentAware, 0.0).validate(), ConfigError);
  CHECK_THROWS_AS(config(PolicyMode::UcbHAU, 0.3, -1.0).validate(), ConfigError);
  CHECK_NOTHROW(config(PolicyMode::UcbHAU, 0.0, 1.0).validate());
  CHECK_NOTHROW(config(PolicyMode::Off, 0.0, 0.0).validate());
  auto c = config(PolicyMode::SegmentAware);
  c.use_point = c.use_prob = false;
  CHECK_THROWS_AS(c.validate(), ConfigError);
}

TEST_CASE("ties go to the lower item id and off follows r") {
  std::vector<ScoredCandidate> c(3);
  c[0].item_id = 9;
  c[0].r = 0.5;
  c[1].item_id = 4;
  c[1].r = 0.5;
  c[2].item_id = 6;
  c[2].r = 0.7;
  CHECK(rank(c, config(PolicyMode::Off), ctx(sim::Segment::LAU)) == std::vector<int>{6, 4, 9});

  std::vector<ScoredCandidate> none;
  CHECK(rank(none, config(PolicyMode::SegmentAware), ctx(sim::Segment::HAU)).empty());
}

TEST_CASE("deboost agrees with enumeration over every risky mask") {
  CounterRng rng(5);
  auto base = random_candidates(rng, 5);
  // A shared r value exercises the tie rule.
  base[3].r = base[1].r;
  const auto cfg = config(PolicyMode::DeboostLAU, 0.3);
  for (int mask = 0; mask < 32; ++mask) {
    auto c = base;
    std::vector<double> score;
    std::vector<int> ids;
    for (int i = 0; i < 5; ++i) {
      const bool risky = (mask >> i) & 1;
      c[static_cast<std::size_t>(i)].u_point = risky ? 0.9 : 0.1;
      c[static_cast<std::size_t>(i)].u_prob = 0.1;
      score.push_back(c[static_cast<std::size_t>(i)].r - (risky ? 0.3 : 0.0));
      ids.push_back(c[static_cast<std::size_t>(i)].item_id);
    }
    CHECK(rank(c, cfg, ctx(sim::Segment::LAU)) == order_by_counting(score, ids));
    for (int i = 0; i < 5; ++i) CHECK(c[static_cast<std::size_t>(i)].risky == static_cast<bool>((mask >> i) & 1));
  }
}

TEST_CASE("segment-aware dispatch") {
  CounterRng rng(6);
  const auto base = random_candidates(rng, 12);
  std::vector<double> r, ucb;
  std::vector<int> ids;
  for (const auto& c : base) {
    r.push_back(c.r);
    ucb.push_back(c.r + 1.0 * std::max(c.u_point, c.u_prob));
    ids.push_back(c.item_id);
  }
  auto c = base;
  const auto hau = rank(c, config(PolicyMode::SegmentAware), ctx(sim::Segment::HAU));
  CHECK(hau == order_by_counting(ucb, ids));
  c = base;
  CHECK(rank(c, config(PolicyMode::DeboostLAU), ctx(sim::Segment::HAU)) == order_by_counting(r, ids));
  c = base;
  CHECK(rank(c, config(PolicyMode::UcbHAU), ctx(sim::Segment::LAU)) == order_by_counting(r, ids));
  c = base;
  const auto lau = rank(c, config(PolicyMode::SegmentAware), ctx(sim::Segment::LAU));
  std::vector<double> deboost;
  for (const auto& x : c) deboost.push_back(x.r - (x.risky ? 0.3 : 0.0));
  CHECK(lau == order_by_counting(deboost, ids));
}

TEST_CASE("adding a constant to every score keeps the order") {
  CounterRng rng(7);
  for (auto mode : {PolicyMode::Off, PolicyMode::DeboostLAU, PolicyMode::UcbHAU, PolicyMode::SegmentAware}) {
    for (auto seg : {sim::Segment::LAU, sim::Segment::HAU}) {
      auto a = random_candidates(rng, 20);
      auto b = a;
      for (auto& c : b) c.r += 0.25;
      CHECK(rank(a, config(mode), ctx(seg)) == rank(b, config(mode), ctx(seg)));
    }
  }
}

TEST_CASE("marking an item risky never lifts it") {
  CounterRng rng(8);
  const auto cfg = config(PolicyMode::DeboostLAU, 0.2);
  for (int trial = 0; trial < 200; ++trial) {
    auto a = random_candidates(rng, 10);
    for (auto& c : a) c.u_prob = 0.0;
    const std::size_t k = rng.below(a.size());
    a[k].u_point = 0.1;
    auto b = a;
    b[k].u_point = 0.9;
    const auto pa = position_of(rank(a, cfg, ctx(sim::Segment::LAU)), a[k].item_id);
    const auto pb = position_of(rank(b, cfg, ctx(sim::Segment::LAU)), a[k].item_id);
    CHECK(pb >= pa);
  }
}

TEST_CASE("larger omega never lowers the most uncertain item") {
  CounterRng rng(9);
  for (int trial = 0; trial < 100; ++trial) {
    auto base = random_candidates(rng, 10);
    std::size_t top = 0;
    for (std::size_t i = 1; i < base.size(); ++i) {
      if (std::max(base[i].u_point, base[i].u_prob) > std::max(base[top].u_point, base[top].u_prob)) top = i;
    }
    std::size_t prev = base.size();
    for (double omega : {0.01, 0.1, 0.3, 1.0, 3.0, 10.0}) {
      auto c = base;
      const auto p = position_of(rank(c, config(PolicyMode::UcbHAU, 0.3, omega), ctx(sim::Segment::HAU)),
                                 base[top].item_id);
      CHECK(p <= prev);
      prev = p;
    }
    auto c = base;
    CHECK(rank(c, config(PolicyMode::UcbHAU, 0.3, 1e6), ctx(sim::Segment::HAU)).front() == base[top].item_id);
  }
}

TEST_CASE("vanishing omega reproduces the base order") {
  CounterRng rng(10);
  for (int trial = 0; trial < 50; ++trial) {
    auto a = random_candidates(rng, 15);
    auto b = a;
    CHECK(rank(a, config(PolicyMode::UcbHAU, 0.3, 1e-12), ctx(sim::Segment::HAU)) ==
          rank(b, config(PolicyMode::Off), ctx(sim::Segment::HAU)));
  }
}

TEST_CASE("filtering drops risky LAU items only") {
  CounterRng rng(11);
  auto base = random_candidates(rng, 10);
  auto cfg = config(PolicyMode::SegmentAware);
  cfg.filter_risky = true;
  auto c = base;
  const auto lau = rank(c, cfg, ctx(sim::Segment::LAU));
  const auto n_risky = std::count_if(c.begin(), c.end(), [](const ScoredCandidate& x) { return x.risky; });
  CHECK(n_risky > 0);
  CHECK(lau.size() == base.size() - static_cast<std::size_t>(n_risky));
  for (const auto& x : c) CHECK((position_of(lau, x.item_id) == lau.size()) == x.risky);
  c = base;
  CHECK(rank(c, cfg, ctx(sim::Segment::HAU)).size() == base.size());
}

TEST_CASE("matched uniform range") {
  CounterRng rng(12);
  std::vector<double> v(20000);
  for (auto& x : v) x = 2.0 + rng.normal();
  const auto u = UniformRange::matching(v);
  double m = 0.0, s = 0.0;
  for (double x : v) m += x;
  m /= static_cast<double>(v.size());
  for (double x : v) s += (x - m) * (x - m);
  s = std::sqrt(s / static_cast<double>(v.size()));
  CHECK((u.lo + u.hi) / 2.0 == doctest::Approx(m).epsilon(1e-12));
  CHECK((u.hi - u.lo) / std::sqrt(12.0) == doctest::Approx(s).epsilon(1e-12));
  CHECK(u.quantile(0.95) == doctest::Approx(u.lo + 0.95 * (u.hi - u.lo)));
  const std::vector<double> skewed{0.0, 0.0, 0.0, 0.0, 1.0};
  CHECK(UniformRange::matching(skewed).lo == 0.0);
  CHECK_THROWS_AS(UniformRange::matching(std::vector<double>{}), DataError);
}

TEST_CASE("random scores are seeded, bounded and flag at 1 - q per channel") {
  auto cfg = config(PolicyMode::RandomScore);
  cfg.thresholds.q = 0.95;
  cfg.random_seed = 77;
  cfg.random_point = {0.1, 0.3};
  cfg.random_prob = {0.0, 0.02};
  CounterRng rng(13);
  const auto base = random_candidates(rng, 20);

  auto a = base, b = base;
  CHECK(rank(a, cfg, ctx(sim::Segment::LAU, 3)) == rank(b, cfg, ctx(sim::Segment::LAU, 3)));
  for (std::size_t i = 0; i < a.size(); ++i) CHECK(a[i].u_point == b[i].u_point);
  auto c = base;
  rank(c, cfg, ctx(sim::Segment::LAU, 4));
  CHECK(c[0].u_point != a[0].u_point);

  long n = 0, over_point = 0, over_prob = 0;
  for (int req = 0; req < 1000; ++req) {
    auto x = base;
    rank(x, cfg, ctx(sim::Segment::LAU, req));
    for (const auto& s : x) {
      CHECK(s.u_point >= 0.1);
      CHECK(s.u_point <= 0.3);
      CHECK(s.u_prob <= 0.02);
      CHECK(s.risky == (s.u_point > 0.29 || s.u_prob > 0.019));
      over_point += s.u_point > 0.29;
      over_prob += s.u_prob > 0.019;
      ++n;
    }
  }
  // 20000 draws: binomial sd of a 5% rate is about 0.0015.
  CHECK(std::abs(static_cast<double>(over_point) / static_cast<double>(n) - 0.05) < 0.0046);
  CHECK(std::abs(static_cast<double>(over_prob) / static_cast<double>(n) - 0.05) < 0.0046);
}

}  // TEST_SUITE
