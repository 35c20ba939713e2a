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

#include "simworld/world.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "common/errors.hpp"
#include "common/rng.hpp"

namespace uncerank::sim {
namespace {

constexpr int kMinutesPerDay = 1440;
constexpr double kLauMonthlyDays = 7.0;

double sigmoid(double z) { return 1.0 / (1.0 + std::exp(-z)); }

double dot(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

std::vector<double> gaussian_vector(CounterRng& rng, int d, double scale) {
  std::vector<double> v(static_cast<std::size_t>(d));
  const double s = scale / std::sqrt(static_cast<double>(d));
  for (auto& x : v) x = s * rng.normal();
  return v;
}

// Per user-day draw budget; see the header comment on paired randomness.
struct DayDraws {
  double active = 0.0;
  double churn = 0.0;
  std::vector<double> minute;      // per request
  std::vector<double> candidate;   // per request * n_candidates
  std::vector<double> outcome;     // per request * slate_size * 3
};

DayDraws draw_user_day(CounterRng& rng, const WorldConfig& c) {
  DayDraws d;
  const auto r = static_cast<std::size_t>(c.requests_per_day);
  d.active = rng.uniform();
  d.minute.resize(r);
  d.candidate.resize(r * static_cast<std::size_t>(c.n_candidates));
  d.outcome.resize(r * static_cast<std::size_t>(c.slate_size) * 3);
  for (auto& x : d.minute) x = rng.uniform();
  for (auto& x : d.candidate) x = rng.uniform();
  for (auto& x : d.outcome) x = rng.uniform();
  d.churn = rng.uniform();
  return d;
}

double mu_fast(const WorldState& w, const UserProfile& u, const LiveStream& s, long age) {
  if (w.config.fixed_ctr) return *w.config.fixed_ctr;
  const double offset = u.segment == Segment::LAU ? w.config.lau_offset : w.config.hau_offset;
  return sigmoid(dot(u.latent_pref, s.latent_quality) + s.base_appeal + age_effect(w.config, age) + offset);
}

// Partial Fisher-Yates over `pool` driven by pre-drawn uniforms.
void sample_into(std::vector<int>& pool, std::size_t k, const double* draws, std::vector<int>& out) {
  const std::size_t take = std::min(k, pool.size());
  for (std::size_t i = 0; i < take; ++i) {
    const std::size_t span = pool.size() - i;
    const std::size_t j = i + std::min(span - 1, static_cast<std::size_t>(draws[i] * static_cast<double>(span)));
    std::swap(pool[i], pool[j]);
    out.push_back(pool[i]);
  }
}

}  // namespace

const char* to_string(Segment s) { return s == Segment::LAU ? "LAU" : "HAU"; }

void WorldConfig::validate() const {
  auto require = [](bool ok, const std::string& msg) {
    if (!ok) throw ConfigError("invalid world config: " + msg);
  };
  require(n_users > 0, "n_users must be positive");
  require(n_streams > 0, "n_streams must be positive");
  require(n_tags > 0, "n_tags must be positive");
  require(d_u > 0, "d_u must be positive");
  require(lau_fraction >= 0.0 && lau_fraction <= 1.0, "lau_fraction must lie in [0, 1]");
  require(slate_size > 0, "slate_size must be positive");
  require(n_candidates >= slate_size, "n_candidates must be at least slate_size");
  require(requests_per_day > 0, "requests_per_day must be positive");
  require(interest_fraction >= 0.0 && interest_fraction <= 1.0, "interest_fraction must lie in [0, 1]");
  require(interest_tags >= 0 && interest_tags <= n_tags, "interest_tags must lie in [0, n_tags]");
  require(lau_activity_min > 0.0 && lau_activity_min <= lau_activity_max &&
              lau_activity_max * 30.0 < kLauMonthlyDays,
          "LAU activity range must satisfy 0 < min <= max and max * 30 < 7");
  require(hau_activity_min * 30.0 >= kLauMonthlyDays && hau_activity_min <= hau_activity_max &&
              hau_activity_max <= 1.0,
          "HAU activity range must satisfy 7 <= min * 30 and max <= 1");
  require(pref_cap > 0.0, "pref_cap must be positive");
  require(age_tau > 0.0 && age_scale >= 0.0, "age_tau > 0 and age_scale >= 0 required");
  require(low_quality_floor >= 0.0 && low_quality_floor <= 1.0, "low_quality_floor must lie in [0, 1]");
  require(churn_penalty >= 0.0 && lau_penalty_mult > hau_penalty_mult && hau_penalty_mult >= 0.0,
          "churn penalties must satisfy penalty >= 0 and lau_mult > hau_mult >= 0");
  require(churn_decay >= 0.0 && churn_decay <= 1.0, "churn_decay must lie in [0, 1]");
  require(initial_hazard >= 0.0 && initial_hazard <= 1.0, "initial_hazard must lie in [0, 1]");
  require(stream_life_min > 0 && stream_life_min <= stream_life_max, "stream lifetimes invalid");
  require(horizon_days > 0, "horizon_days must be positive");
  require(!fixed_ctr || (*fixed_ctr > 0.0 && *fixed_ctr < 1.0), "fixed_ctr must lie in (0, 1)");
  require(layout.n_tags == static_cast<std::size_t>(n_tags), "layout tag count mismatch");
  require(layout.user_buckets > 0 && layout.item_buckets > 0, "feature bucket counts must be positive");
}

WorldConfig WorldConfig::from_config(const KeyValueConfig& cfg) {
  WorldConfig c;
  c.n_users = static_cast<int>(cfg.get_int("n_users"));
  c.n_streams = static_cast<int>(cfg.get_int("n_streams"));
  c.n_tags = static_cast<int>(cfg.get_int("n_tags", c.n_tags));
  c.d_u = static_cast<int>(cfg.get_int("d_u", c.d_u));
  c.lau_fraction = cfg.get_double("lau_fraction", c.lau_fraction);
  if (cfg.has("hau_fraction")) {
    const double hau = cfg.get_double("hau_fraction");
    if (std::abs(hau + c.lau_fraction - 1.0) > 1e-9) {
      throw ConfigError("invalid world config: lau_fraction + hau_fraction must equal 1");
    }
  }
  c.slate_size = static_cast<int>(cfg.get_int("slate_size", c.slate_size));
  c.n_candidates = static_cast<int>(cfg.get_int("n_candidates", c.n_candidates));
  c.requests_per_day = static_cast<int>(cfg.get_int("requests_per_day", c.requests_per_day));
  c.interest_fraction = cfg.get_double("interest_fraction", c.interest_fraction);
  c.interest_tags = static_cast<int>(cfg.get_int("interest_tags", c.interest_tags));
  c.lau_activity_min = cfg.get_double("lau_activity_min", c.lau_activity_min);
  c.lau_activity_max = cfg.get_double("lau_activity_max", c.lau_activity_max);
  c.hau_activity_min = cfg.get_double("hau_activity_min", c.hau_activity_min);
  c.hau_activity_max = cfg.get_double("hau_activity_max", c.hau_activity_max);
  c.pref_scale = cfg.get_double("pref_scale", c.pref_scale);
  c.pref_cap = cfg.get_double("pref_cap", c.pref_cap);
  c.tag_center_scale = cfg.get_double("tag_center_scale", c.tag_center_scale);
  c.quality_noise = cfg.get_double("quality_noise", c.quality_noise);
  c.base_appeal_mean = cfg.get_double("base_appeal_mean", c.base_appeal_mean);
  c.base_appeal_sd = cfg.get_double("base_appeal_sd", c.base_appeal_sd);
  c.age_scale = cfg.get_double("age_scale", c.age_scale);
  c.age_tau = cfg.get_double("age_tau", c.age_tau);
  c.lau_offset = cfg.get_double("lau_offset", c.lau_offset);
  c.hau_offset = cfg.get_double("hau_offset", c.hau_offset);
  c.low_quality_floor = cfg.get_double("low_quality_floor", c.low_quality_floor);
  c.churn_penalty = cfg.get_double("churn_penalty", c.churn_penalty);
  c.lau_penalty_mult = cfg.get_double("lau_penalty_mult", c.lau_penalty_mult);
  c.hau_penalty_mult = cfg.get_double("hau_penalty_mult", c.hau_penalty_mult);
  c.churn_decay = cfg.get_double("churn_decay", c.churn_decay);
  c.valuable_relief = cfg.get_double("valuable_relief", c.valuable_relief);
  c.initial_hazard = cfg.get_double("initial_hazard", c.initial_hazard);
  c.quality_scale = cfg.get_double("quality_scale", c.quality_scale);
  c.watch_scale = cfg.get_double("watch_scale", c.watch_scale);
  c.stream_life_min = cfg.get_int("stream_life_min", c.stream_life_min);
  c.stream_life_max = cfg.get_int("stream_life_max", c.stream_life_max);
  c.horizon_days = static_cast<int>(cfg.get_int("horizon_days", cfg.get_int("days", c.horizon_days)));
  if (cfg.has("fixed_ctr")) c.fixed_ctr = cfg.get_double("fixed_ctr");
  c.layout.user_buckets = static_cast<std::size_t>(cfg.get_int("user_buckets", 1024));
  c.layout.item_buckets = static_cast<std::size_t>(cfg.get_int("item_buckets", 256));
  c.layout.n_tags = static_cast<std::size_t>(c.n_tags);
  if (cfg.has("age_edges")) {
    c.layout.age_edges.clear();
    for (double e : cfg.get_doubles("age_edges")) c.layout.age_edges.push_back(static_cast<long>(e));
    if (!std::is_sorted(c.layout.age_edges.begin(), c.layout.age_edges.end())) {
      throw ConfigError("invalid world config: age_edges must be increasing");
    }
  }
  return c;
}

const UserProfile& WorldState::user(int user_id) const {
  if (user_id < 0 || static_cast<std::size_t>(user_id) >= users.size()) {
    throw LookupError("unknown user id " + std::to_string(user_id));
  }
  return users[static_cast<std::size_t>(user_id)];
}

const LiveStream& WorldState::stream(int item_id) const {
  if (item_id < 0 || static_cast<std::size_t>(item_id) >= streams.size()) {
    throw LookupError("unknown item id " + std::to_string(item_id));
  }
  return streams[static_cast<std::size_t>(item_id)];
}

WorldState build_world(const WorldConfig& config, std::uint64_t seed) {
  config.validate();
  WorldState w;
  w.config = config;
  w.rng_seed = seed;

  auto tag_rng = CounterRng::substream(seed, "world/tags");
  for (int t = 0; t < config.n_tags; ++t) {
    w.tag_centers.push_back(gaussian_vector(tag_rng, config.d_u, config.tag_center_scale));
  }

  // Exact LAU count, positions shuffled.
  const int n_lau = static_cast<int>(std::lround(config.lau_fraction * config.n_users));
  std::vector<std::uint8_t> is_lau(static_cast<std::size_t>(config.n_users), 0);
  std::fill(is_lau.begin(), is_lau.begin() + n_lau, 1);
  auto seg_rng = CounterRng::substream(seed, "world/segments");
  seg_rng.shuffle(is_lau);

  for (int u = 0; u < config.n_users; ++u) {
    auto rng = CounterRng::substream(seed, "world/user", static_cast<std::uint64_t>(u));
    UserProfile p;
    p.user_id = u;
    p.latent_pref = gaussian_vector(rng, config.d_u, config.pref_scale);
    const double norm = std::sqrt(dot(p.latent_pref, p.latent_pref));
    if (norm > config.pref_cap) {
      for (auto& x : p.latent_pref) x *= config.pref_cap / norm;
    }
    const bool lau = is_lau[static_cast<std::size_t>(u)] != 0;
    p.activity_rate = lau ? rng.uniform(config.lau_activity_min, config.lau_activity_max)
                          : rng.uniform(config.hau_activity_min, config.hau_activity_max);
    // Segment follows the monthly active-day threshold.
    p.segment = p.activity_rate * 30.0 < kLauMonthlyDays ? Segment::LAU : Segment::HAU;
    p.tenure_days = static_cast<int>(rng.below(static_cast<std::size_t>(config.max_tenure_days) + 1));
    std::vector<int> order(static_cast<std::size_t>(config.n_tags));
    std::iota(order.begin(), order.end(), 0);
    std::vector<double> affinity(order.size());
    for (std::size_t t = 0; t < order.size(); ++t) affinity[t] = dot(p.latent_pref, w.tag_centers[t]);
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
      return affinity[static_cast<std::size_t>(a)] > affinity[static_cast<std::size_t>(b)];
    });
    p.interest_tags.assign(order.begin(), order.begin() + config.interest_tags);
    w.users.push_back(std::move(p));
  }

  const long horizon_min = static_cast<long>(config.horizon_days + 1) * kMinutesPerDay;
  for (int i = 0; i < config.n_streams; ++i) {
    auto rng = CounterRng::substream(seed, "world/stream", static_cast<std::uint64_t>(i));
    LiveStream s;
    s.item_id = i;
    s.category_tag = static_cast<int>(rng.below(static_cast<std::size_t>(config.n_tags)));
    s.latent_quality = gaussian_vector(rng, config.d_u, config.quality_noise);
    const auto& center = w.tag_centers[static_cast<std::size_t>(s.category_tag)];
    for (std::size_t k = 0; k < center.size(); ++k) s.latent_quality[k] += center[k];
    s.base_appeal = config.base_appeal_mean + config.base_appeal_sd * rng.normal();
    // Streams start between one max lifetime before day 1 and the horizon end.
    const long lo = kMinutesPerDay - config.stream_life_max;
    s.start_minute = lo + static_cast<long>(rng.below(static_cast<std::size_t>(horizon_min - lo)));
    s.end_minute = s.start_minute + config.stream_life_min +
                   static_cast<long>(rng.below(static_cast<std::size_t>(config.stream_life_max - config.stream_life_min + 1)));
    w.streams.push_back(std::move(s));
  }

  w.churn_state.assign(static_cast<std::size_t>(config.n_users), config.initial_hazard);
  w.churned.assign(static_cast<std::size_t>(config.n_users), 0);
  return w;
}

double age_effect(const WorldConfig& config, long age_min) {
  return config.age_scale * (1.0 - std::exp(-static_cast<double>(age_min) / config.age_tau));
}

double true_ctr(const WorldState& world, int user_id, int item_id, long stream_age_min) {
  const auto& u = world.user(user_id);
  const auto& s = world.stream(item_id);
  return mu_fast(world, u, s, stream_age_min);
}

double aleatoric_var(double mu) { return mu * (1.0 - mu); }

rec::FeatureVector features_for(const WorldState& world, int user_id, int item_id, long age_min) {
  const auto& u = world.user(user_id);
  const auto& s = world.stream(item_id);
  return world.config.layout.encode(user_id, item_id, s.category_tag, age_min, u.segment == Segment::LAU);
}

double update_churn(WorldState& world, int user_id, std::span<const ImpressionEvent> shown) {
  const auto& c = world.config;
  const auto& u = world.user(user_id);
  const double mult = u.segment == Segment::LAU ? c.lau_penalty_mult : c.hau_penalty_mult;
  double h = world.churn_state[static_cast<std::size_t>(user_id)] * (1.0 - c.churn_decay);
  for (const auto& e : shown) {
    if (e.user_id != user_id) throw ProtocolError("update_churn: event belongs to another user");
    const double mu = true_ctr(world, e.user_id, e.item_id, e.stream_age_min);
    if (mu < c.low_quality_floor) h += c.churn_penalty * mult;
    if (e.valuable) h -= c.valuable_relief;
  }
  h = std::clamp(h, 0.0, 1.0);
  world.churn_state[static_cast<std::size_t>(user_id)] = h;
  return h;
}

std::vector<ImpressionEvent> generate_day(WorldState& world, int day, const SlateProvider& provider) {
  if (day != world.day_index) {
    throw ProtocolError("generate_day: expected day " + std::to_string(world.day_index) + ", got " +
                        std::to_string(day));
  }
  const auto& c = world.config;
  std::vector<ImpressionEvent> events;
  long long seq = 0;
  const long day_start = static_cast<long>(day) * kMinutesPerDay;

  std::vector<int> interest_pool, other_pool, picked;
  std::vector<std::uint8_t> in_interest(static_cast<std::size_t>(c.n_tags));

  for (auto& user : world.users) {
    const auto uid = static_cast<std::size_t>(user.user_id);
    auto rng = CounterRng::substream(world.rng_seed, "world/day", static_cast<std::uint64_t>(day), uid);
    const DayDraws draws = draw_user_day(rng, c);
    world.stream_checksum = combine(combine(world.stream_checksum, rng.key()), rng.draws());

    if (world.churned[uid] || !(draws.active < user.activity_rate)) continue;

    std::fill(in_interest.begin(), in_interest.end(), 0);
    for (int t : user.interest_tags) in_interest[static_cast<std::size_t>(t)] = 1;

    std::vector<ImpressionEvent> shown;
    for (int r = 0; r < c.requests_per_day; ++r) {
      const auto ri = static_cast<std::size_t>(r);
      SlateRequest req;
      req.day = day;
      req.user_id = user.user_id;
      req.segment = user.segment;
      req.request_index = r;
      req.minute = day_start + std::min<long>(kMinutesPerDay - 1, static_cast<long>(draws.minute[ri] * kMinutesPerDay));

      interest_pool.clear();
      other_pool.clear();
      for (const auto& s : world.streams) {
        if (!s.live_at(req.minute)) continue;
        (in_interest[static_cast<std::size_t>(s.category_tag)] ? interest_pool : other_pool).push_back(s.item_id);
      }
      picked.clear();
      const double* cd = draws.candidate.data() + ri * static_cast<std::size_t>(c.n_candidates);
      const auto n_int = static_cast<std::size_t>(std::lround(c.interest_fraction * c.n_candidates));
      sample_into(interest_pool, n_int, cd, picked);
      const std::size_t rest = static_cast<std::size_t>(c.n_candidates) - picked.size();
      // Leftover interest items stay eligible for the general slots.
      for (std::size_t i = picked.size(); i < interest_pool.size(); ++i) other_pool.push_back(interest_pool[i]);
      sample_into(other_pool, rest, cd + picked.size(), picked);
      std::sort(picked.begin(), picked.end());
      for (int id : picked) {
        const auto& s = world.streams[static_cast<std::size_t>(id)];
        req.candidates.push_back({id, s.category_tag, req.minute - s.start_minute});
      }

      const std::vector<int> ranked = provider(req);
      const std::size_t n_show = std::min(ranked.size(), static_cast<std::size_t>(c.slate_size));
      std::vector<int> seen;
      for (std::size_t p = 0; p < n_show; ++p) {
        const int id = ranked[p];
        auto it = std::find_if(req.candidates.begin(), req.candidates.end(),
                               [id](const Candidate& cand) { return cand.item_id == id; });
        if (it == req.candidates.end()) {
          throw ProtocolError("slate provider returned item " + std::to_string(id) + " not in the candidate set");
        }
        if (std::find(seen.begin(), seen.end(), id) != seen.end()) {
          throw ProtocolError("slate provider returned item " + std::to_string(id) + " twice");
        }
        seen.push_back(id);
        const auto& s = world.streams[static_cast<std::size_t>(id)];
        const double mu = mu_fast(world, user, s, it->age_min);
        const double* od = draws.outcome.data() + (ri * static_cast<std::size_t>(c.slate_size) + p) * 3;

        ImpressionEvent e;
        e.event_id = static_cast<long long>(day) * 100000000LL + seq++;
        e.day = day;
        e.user_id = user.user_id;
        e.item_id = id;
        e.category_tag = s.category_tag;
        e.stream_age_min = it->age_min;
        e.position = static_cast<int>(p);
        e.segment = user.segment;
        e.features = c.layout.encode(user.user_id, id, s.category_tag, it->age_min, user.segment == Segment::LAU);
        e.clicked = od[0] < mu;
        e.valuable = e.clicked && od[1] < std::clamp(mu * c.quality_scale, 0.0, 1.0);
        e.watch_minutes = e.clicked ? c.watch_scale * (0.5 + mu) * -std::log1p(-od[2]) : 0.0;
        shown.push_back(e);
      }
    }

    const double hazard = update_churn(world, user.user_id, shown);
    if (draws.churn < hazard) world.churned[uid] = 1;
    for (auto& e : shown) events.push_back(std::move(e));
  }

  ++world.day_index;
  return events;
}

}  // namespace uncerank::sim
