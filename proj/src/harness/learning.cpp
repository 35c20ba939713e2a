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

#include "harness/learning.hpp"

#include <algorithm>
#include <cmath>

#include "common/errors.hpp"
#include "common/rng.hpp"
#include "unckit/bayes_head.hpp"
#include "unckit/beta.hpp"

namespace uncerank::harness {

Needs Needs::for_variant(const Variant& v) {
  Needs n{false, false, false, false};
  for (ChannelSource s : {v.point, v.prob}) {
    n.critic |= s == ChannelSource::Critic;
    n.bayes |= s == ChannelSource::Bayes;
    n.ensemble |= s == ChannelSource::Ensemble;
    n.mcdropout |= s == ChannelSource::McDropout;
  }
  return n;
}

LearningSystem::LearningSystem(const ExperimentConfig& cfg, Variant variant, std::uint64_t seed, Needs needs,
                               bool keep_logs)
    : cfg_(cfg), variant_(std::move(variant)), seed_(seed), needs_(needs), keep_logs_(keep_logs) {
  rec::ModelDims dims;
  dims.d_x = cfg_.world.layout.dim();
  dims.d_e = cfg_.d_e;
  dims.d_h = cfg_.d_h;
  dims.n_heads = needs_.ensemble ? cfg_.n_heads : 0;
  ckpt_ = rec::init_checkpoint(dims, substream_key(seed_, "model"), cfg_.dropout_rate);
  cfg_.train.seed = substream_key(seed_, "train");
  cfg_.train.train_ensemble = needs_.ensemble;
  cfg_.critic.seed = substream_key(seed_, "critic");
}

bool LearningSystem::policy_active(int day) const {
  return variant_.mode != pol::PolicyMode::Off && day >= cfg_.policy_start_day && thresholds_.has_value();
}

double LearningSystem::perturbation_rate(sim::Segment s) const {
  const auto& t = perturbation_[static_cast<std::size_t>(s)];
  return t.positions > 0 ? static_cast<double>(t.changed) / static_cast<double>(t.positions) : 0.0;
}

LearningSystem::Channels LearningSystem::score(const rec::FeatureVector& x, std::uint64_t mc_seed) const {
  Channels c;
  c.trace = rec::forward(ckpt_, x, needs_.ensemble ? rec::ForwardMode::ensemble() : rec::ForwardMode::main());
  if (needs_.ensemble) c.u_ens = unc::u_ensemble(c.trace);
  if (needs_.mcdropout) {
    const auto mc = rec::forward(ckpt_, x, rec::ForwardMode::mc_dropout(cfg_.mc_passes, mc_seed, cfg_.dropout_rate));
    c.u_mc = unc::u_mcdropout(mc);
  }
  if (needs_.bayes) {
    const auto bp = unc::beta_params(ckpt_.bayes, c.trace.hidden);
    c.u_prob = unc::u_prob(bp);
    c.u_total = unc::variance_decomposition(bp).total;
  }
  if (needs_.critic && critic_) c.u_point = unc::u_point(*critic_, unc::make_critic_input(x, c.trace));
  return c;
}

double LearningSystem::channel(ChannelSource s, const Channels& c) const {
  switch (s) {
    case ChannelSource::Critic:
      return c.u_point;
    case ChannelSource::Bayes:
      return c.u_prob;
    case ChannelSource::Ensemble:
      return c.u_ens;
    case ChannelSource::McDropout:
      return c.u_mc;
    case ChannelSource::None:
      break;
  }
  return 0.0;
}

std::vector<int> LearningSystem::serve(const sim::SlateRequest& req, const sim::WorldState& world) {
  const bool active = policy_active(req.day);
  const bool real_channels = active && variant_.mode != pol::PolicyMode::RandomScore;
  std::vector<pol::ScoredCandidate> cands;
  cands.reserve(req.candidates.size());
  for (const auto& cand : req.candidates) {
    const rec::FeatureVector x = sim::features_for(world, req.user_id, cand.item_id, cand.age_min);
    pol::ScoredCandidate sc;
    sc.user_id = req.user_id;
    sc.item_id = cand.item_id;
    if (real_channels) {
      const std::uint64_t mc_seed =
          substream_key(seed_, "serve/mc", static_cast<std::uint64_t>(req.day), static_cast<std::uint64_t>(req.user_id),
                        (static_cast<std::uint64_t>(req.request_index) << 32) ^ static_cast<std::uint32_t>(cand.item_id));
      const Channels ch = score(x, mc_seed);
      sc.r = ch.trace.score;
      sc.u_point = channel(variant_.point, ch);
      sc.u_prob = channel(variant_.prob, ch);
    } else {
      sc.r = rec::forward(ckpt_, x).score;
    }
    cands.push_back(sc);
  }
  static const pol::PolicyConfig kOff{};
  const pol::PolicyConfig& pc = active ? policy_ : kOff;
  const std::vector<int> ids = pol::rank(cands, pc, {req.day, req.user_id, req.request_index, req.segment});
  if (active) {
    const std::vector<int> base = pol::rank(cands, kOff, {req.day, req.user_id, req.request_index, req.segment});
    const std::size_t n = std::min<std::size_t>(ids.size(), static_cast<std::size_t>(cfg_.world.slate_size));
    auto& t = perturbation_[static_cast<std::size_t>(req.segment)];
    for (std::size_t p = 0; p < n; ++p) t.changed += ids[p] != base[p] ? 1 : 0;
    t.positions += static_cast<long>(n);
  }
  if (keep_logs_) {
    const std::size_t n = std::min<std::size_t>(ids.size(), static_cast<std::size_t>(cfg_.world.slate_size));
    for (std::size_t p = 0; p < n; ++p) {
      const auto it = std::find_if(cands.begin(), cands.end(), [&](const auto& c) { return c.item_id == ids[p]; });
      slates_.push_back({req.day, req.user_id, static_cast<int>(p), ids[p], *it, pol::to_string(pc.mode)});
    }
  }
  return ids;
}

void LearningSystem::end_of_day(int day, std::span<const sim::ImpressionEvent> events, const sim::WorldState& world) {
  if (day != last_day_ + 1) {
    throw ProtocolError("learning system expected day " + std::to_string(last_day_ + 1) + ", got " +
                        std::to_string(day));
  }
  std::vector<long long> ids;
  ids.reserve(events.size());
  for (const auto& e : events) ids.push_back(e.event_id);
  const auto mask = rec::calibration_split(ids, cfg_.calibration_fraction, seed_);

  std::vector<rec::Example> train, held;
  std::vector<unc::RealizedErrorSample> errors;
  const std::uint64_t mc_root = substream_key(seed_, "score/mc");
  for (std::size_t i = 0; i < events.size(); ++i) {
    const auto& ev = events[i];
    rec::Example ex{ev.features, ev.clicked ? 1 : 0, ev.event_id, day};
    if (day >= 2 && (keep_logs_ || (needs_.critic && !mask[i]))) {
      // Prequential: the state still holds the day - 1 models.
      const Channels ch = score(ex.x, combine(mc_root, static_cast<std::uint64_t>(ev.event_id)));
      const double f = ch.trace.score;
      if (keep_logs_) {
        ScoreRow r;
        r.day = day;
        r.event_id = ev.event_id;
        r.user_id = ev.user_id;
        r.item_id = ev.item_id;
        r.segment = ev.segment;
        r.age_min = ev.stream_age_min;
        r.calibration = mask[i] != 0;
        r.f = f;
        r.y = ex.y;
        r.e = unc::squared_error(f, ex.y);
        r.mu_true = sim::true_ctr(world, ev.user_id, ev.item_id, ev.stream_age_min);
        r.u_point = needs_.critic && critic_ ? ch.u_point : std::nan("");
        r.u_prob = needs_.bayes ? ch.u_prob : std::nan("");
        r.u_total = needs_.bayes ? ch.u_total : std::nan("");
        r.u_ensemble = needs_.ensemble ? ch.u_ens : std::nan("");
        r.u_mcdropout = needs_.mcdropout ? ch.u_mc : std::nan("");
        r.codes = cfg_.world.layout.decode(ev.features);
        scores_.push_back(r);
      }
      if (!mask[i]) {
        unc::RealizedErrorSample s;
        s.day = day;
        s.event_id = ev.event_id;
        s.z = unc::make_critic_input(ex.x, ch.trace);
        s.f = f;
        s.y = ex.y;
        s.e = unc::squared_error(f, ex.y);
        errors.push_back(std::move(s));
      }
    }
    (mask[i] ? held : train).push_back(std::move(ex));
  }

  ckpt_ = rec::train_day(ckpt_, day, train, cfg_.train).ckpt;

  auto push = [](auto& window, auto&& item, int cap) {
    window.push_back(std::move(item));
    while (static_cast<int>(window.size()) > cap) window.pop_front();
  };
  push(train_window_, std::move(train), cfg_.bayes_window);
  if (needs_.critic && day >= 2) push(error_window_, std::move(errors), cfg_.critic_window);
  push(cal_window_, std::move(held), cfg_.calibration_window);

  const std::uint64_t before = rec::recommender_hash(ckpt_);
  if (needs_.bayes) {
    std::vector<rec::Example> pool;
    for (const auto& d : train_window_) pool.insert(pool.end(), d.begin(), d.end());
    if (!pool.empty()) {
      unc::BayesConfig bc = cfg_.bayes;
      bc.seed = substream_key(seed_, "bayes", static_cast<std::uint64_t>(day));
      ckpt_.bayes = unc::train_bayes_head(ckpt_, pool, bc);
    }
  }
  if (needs_.critic) {
    std::vector<unc::CriticSample> pool;
    for (const auto& d : error_window_) {
      for (const auto& s : d) pool.push_back({&s.z, s.e});
    }
    if (!pool.empty()) {
      unc::CriticConfig cc = cfg_.critic;
      cc.seed = substream_key(seed_, "critic", static_cast<std::uint64_t>(day));
      critic_ = unc::train_critic(pool, cc, critic_ ? &*critic_ : nullptr);
    }
  }
  freeze_.emplace_back(before, rec::recommender_hash(ckpt_));
  if (keep_logs_) history_.push_back(ckpt_);
  last_day_ = day;
  recalibrate(day);
}

void LearningSystem::recalibrate(int day) {
  thresholds_.reset();
  if (variant_.mode == pol::PolicyMode::Off && !keep_logs_) return;
  if (needs_.critic && !critic_) return;
  cal_scores_.clear();
  std::vector<double> point, prob;
  const std::uint64_t mc_root = substream_key(seed_, "calibration/mc", static_cast<std::uint64_t>(day));
  for (const auto& d : cal_window_) {
    for (const auto& ex : d) {
      const Channels ch = score(ex.x, combine(mc_root, static_cast<std::uint64_t>(ex.event_id)));
      cal_scores_.push_back({ex.day, ex.event_id, ch.u_point, ch.u_prob, ch.u_ens, ch.u_mc});
      point.push_back(channel(variant_.point, ch));
      prob.push_back(channel(variant_.prob, ch));
    }
  }
  if (static_cast<long>(point.size()) < cfg_.n_min) return;
  const int first = cal_window_.front().empty() ? day : cal_window_.front().front().day;
  thresholds_ = cal::calibrate(point, prob, cfg_.q, cfg_.n_min, first, day);

  policy_ = pol::PolicyConfig{};
  policy_.mode = variant_.mode;
  policy_.D = cfg_.D;
  policy_.omega = cfg_.omega;
  policy_.thresholds = *thresholds_;
  policy_.use_point = variant_.point != ChannelSource::None;
  policy_.use_prob = variant_.prob != ChannelSource::None;
  policy_.filter_risky = cfg_.filter_risky;
  policy_.random_seed = substream_key(seed_, "policy/random");
  policy_.random_point = pol::UniformRange::matching(point);
  policy_.random_prob = pol::UniformRange::matching(prob);
  if (variant_.mode != pol::PolicyMode::Off) policy_.validate();
}

}  // namespace uncerank::harness
