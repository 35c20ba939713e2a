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

#include "recmodel/train.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "common/errors.hpp"
#include "common/rng.hpp"

namespace uncerank::rec {

void TrainConfig::validate() const {
  if (!(lr > 0.0)) throw ConfigError("train.lr must be > 0");
  if (epochs < 1) throw ConfigError("train.epochs must be >= 1");
  if (batch_size < 1) throw ConfigError("train.batch_size must be >= 1");
}

TrainConfig TrainConfig::from_config(const KeyValueConfig& cfg) {
  TrainConfig t;
  t.lr = cfg.get_double("train.lr", t.lr);
  t.epochs = static_cast<int>(cfg.get_int("train.epochs", t.epochs));
  t.batch_size = static_cast<int>(cfg.get_int("train.batch_size", t.batch_size));
  t.clip_norm = cfg.get_double("train.clip_norm", t.clip_norm);
  t.validate();
  return t;
}

namespace {

void zero(Tensor& t) { std::fill(t.v.begin(), t.v.end(), 0.0); }

double sq(const Tensor& t) {
  double s = 0.0;
  for (double x : t.v) s += x * x;
  return s;
}

void step(Tensor& p, Tensor& g, double scale) {
  for (std::size_t i = 0; i < p.v.size(); ++i) p.v[i] -= scale * g.v[i];
  zero(g);
}

double clip_scale(double norm2, double clip) {
  if (clip <= 0.0) return 1.0;
  const double n = std::sqrt(norm2);
  return n > clip ? clip / n : 1.0;
}

void train_main(Checkpoint& m, int day, std::span<const Example> ex, const TrainConfig& cfg, double& mean_loss) {
  Checkpoint g = zeros_like(m);
  g.heads.clear();
  const std::size_t de = m.dims.d_e, dh = m.dims.d_h;
  std::vector<std::size_t> order(ex.size());
  std::vector<std::uint32_t> touched;
  std::vector<double> mask(dh, 1.0);
  const double keep = 1.0 - m.dropout_rate;
  auto drop_rng = CounterRng::substream(cfg.seed, "train/dropout", static_cast<std::uint64_t>(day));

  for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
    std::iota(order.begin(), order.end(), std::size_t{0});
    auto rng = CounterRng::substream(cfg.seed, "train/shuffle", static_cast<std::uint64_t>(day),
                                     static_cast<std::uint64_t>(epoch));
    rng.shuffle(order);
    double loss_sum = 0.0;
    for (std::size_t start = 0; start < order.size(); start += static_cast<std::size_t>(cfg.batch_size)) {
      const std::size_t end = std::min(order.size(), start + static_cast<std::size_t>(cfg.batch_size));
      const double w = 1.0 / static_cast<double>(end - start);
      touched.clear();
      for (std::size_t b = start; b < end; ++b) {
        const Example& e = ex[order[b]];
        const std::vector<double>* mk = nullptr;
        if (m.dropout_rate > 0.0) {
          for (auto& v : mask) v = drop_rng.uniform() < keep ? 1.0 / keep : 0.0;
          mk = &mask;
        }
        loss_sum += main_loss_grad(m, e.x, static_cast<double>(e.y), g, w, mk);
        for (const auto& [i, v] : e.x.entries) touched.push_back(i);
      }
      std::sort(touched.begin(), touched.end());
      touched.erase(std::unique(touched.begin(), touched.end()), touched.end());

      double n2 = sq(g.w_c) + sq(g.b_c) + sq(g.W1) + sq(g.b1) + sq(g.W2) + sq(g.b2) + sq(g.w_o) + sq(g.b_o);
      for (auto r : touched) {
        for (std::size_t j = 0; j < de; ++j) n2 += g.emb.v[r * de + j] * g.emb.v[r * de + j];
      }
      const double s = cfg.lr * clip_scale(n2, cfg.clip_norm);
      for (auto r : touched) {
        for (std::size_t j = 0; j < de; ++j) {
          m.emb.v[r * de + j] -= s * g.emb.v[r * de + j];
          g.emb.v[r * de + j] = 0.0;
        }
      }
      step(m.w_c, g.w_c, s);
      step(m.b_c, g.b_c, s);
      step(m.W1, g.W1, s);
      step(m.b1, g.b1, s);
      step(m.W2, g.W2, s);
      step(m.b2, g.b2, s);
      step(m.w_o, g.w_o, s);
      step(m.b_o, g.b_o, s);
    }
    mean_loss = loss_sum / static_cast<double>(ex.size());
  }
}

void train_heads(Checkpoint& m, int day, std::span<const Example> ex, const TrainConfig& cfg) {
  if (m.heads.empty()) return;
  std::vector<std::vector<double>> a1(ex.size());
  for (std::size_t i = 0; i < ex.size(); ++i) a1[i] = trunk_output(m, ex[i].x);
  Checkpoint g = m;
  for (auto& h : g.heads) {
    zero(h.W2);
    zero(h.b2);
    zero(h.w_o);
    zero(h.b_o);
  }
  std::vector<std::size_t> order(ex.size());
  for (std::size_t k = 0; k < m.heads.size(); ++k) {
    auto& hp = m.heads[k];
    auto& hg = g.heads[k];
    for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
      std::iota(order.begin(), order.end(), std::size_t{0});
      auto rng = CounterRng::substream(cfg.seed, "train/head-shuffle", static_cast<std::uint64_t>(day),
                                       static_cast<std::uint64_t>(epoch), k);
      rng.shuffle(order);
      for (std::size_t start = 0; start < order.size(); start += static_cast<std::size_t>(cfg.batch_size)) {
        const std::size_t end = std::min(order.size(), start + static_cast<std::size_t>(cfg.batch_size));
        const double w = 1.0 / static_cast<double>(end - start);
        for (std::size_t b = start; b < end; ++b) {
          head_loss_grad(m, k, a1[order[b]], static_cast<double>(ex[order[b]].y), g, w);
        }
        const double s = cfg.lr * clip_scale(sq(hg.W2) + sq(hg.b2) + sq(hg.w_o) + sq(hg.b_o), cfg.clip_norm);
        step(hp.W2, hg.W2, s);
        step(hp.b2, hg.b2, s);
        step(hp.w_o, hg.w_o, s);
        step(hp.b_o, hg.b_o, s);
      }
    }
  }
}

}  // namespace

TrainResult train_day(const Checkpoint& prev, int day, std::span<const Example> examples, const TrainConfig& cfg) {
  cfg.validate();
  if (prev.day != day - 1) {
    throw ProtocolError("train_day for day " + std::to_string(day) + " needs the day " + std::to_string(day - 1) +
                        " checkpoint, got day " + std::to_string(prev.day));
  }
  for (const auto& e : examples) {
    if (e.day != day) {
      throw ProtocolError("example " + std::to_string(e.event_id) + " is from day " + std::to_string(e.day) +
                          ", expected day " + std::to_string(day));
    }
  }
  TrainResult r;
  r.ckpt = prev;
  r.ckpt.day = day;
  if (examples.empty()) {
    r.empty_input = true;
    return r;
  }
  train_main(r.ckpt, day, examples, cfg, r.mean_loss);
  if (cfg.train_ensemble) train_heads(r.ckpt, day, examples, cfg);
  return r;
}

std::vector<std::uint8_t> calibration_split(std::span<const long long> event_ids, double fraction,
                                            std::uint64_t seed) {
  if (fraction < 0.0 || fraction >= 1.0) throw ConfigError("calibration fraction must be in [0, 1)");
  const std::size_t n = event_ids.size();
  const auto n_cal = static_cast<std::size_t>(std::floor(fraction * static_cast<double>(n)));
  std::vector<std::pair<std::uint64_t, std::size_t>> keyed(n);
  const std::uint64_t salt = substream_key(seed, "calibration/split");
  for (std::size_t i = 0; i < n; ++i) keyed[i] = {combine(salt, static_cast<std::uint64_t>(event_ids[i])), i};
  std::sort(keyed.begin(), keyed.end());
  std::vector<std::uint8_t> mask(n, 0);
  for (std::size_t i = 0; i < n_cal; ++i) mask[keyed[i].second] = 1;
  return mask;
}

const Checkpoint& TrainRun::at(int day) const {
  if (day == 0) return initial;
  if (day < 0 || day > static_cast<int>(checkpoints.size())) {
    throw LookupError("no checkpoint for day " + std::to_string(day));
  }
  return checkpoints[static_cast<std::size_t>(day - 1)];
}

TrainRun train_run(const Checkpoint& initial, const std::vector<std::vector<Example>>& days, const TrainConfig& cfg,
                   double calibration_fraction) {
  const int K = static_cast<int>(days.size());
  if (K < 2) throw ConfigError("a training run needs at least 2 days, got " + std::to_string(K));
  if (initial.day != 0) throw ProtocolError("train_run must start from a day 0 checkpoint");
  TrainRun run;
  run.initial = initial;
  const Checkpoint* latest = &run.initial;
  run.checkpoints.reserve(days.size());
  for (int k = 1; k <= K; ++k) {
    const auto& evs = days[static_cast<std::size_t>(k - 1)];
    std::vector<long long> ids;
    ids.reserve(evs.size());
    for (const auto& e : evs) ids.push_back(e.event_id);
    const auto mask = calibration_split(ids, calibration_fraction, cfg.seed);
    std::vector<Example> train;
    std::vector<long long> cal, tr;
    for (std::size_t i = 0; i < evs.size(); ++i) {
      if (mask[i]) {
        cal.push_back(ids[i]);
      } else {
        train.push_back(evs[i]);
        tr.push_back(ids[i]);
      }
    }
    if (k >= 2) run.prequential.push_back({k, k - 1});
    run.checkpoints.push_back(train_day(*latest, k, train, cfg).ckpt);
    latest = &run.checkpoints.back();
    run.calibration_ids.push_back(std::move(cal));
    run.training_ids.push_back(std::move(tr));
  }
  return run;
}

}  // namespace uncerank::rec
