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

#include "unckit/critic.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "common/errors.hpp"
#include "common/rng.hpp"

namespace uncerank::unc {

std::vector<double> CriticInput::dense() const {
  std::vector<double> z = x.dense();
  z.insert(z.end(), h.begin(), h.end());
  z.push_back(f);
  return z;
}

CriticInput make_critic_input(const rec::FeatureVector& x, const rec::ForwardTrace& trace) {
  return {x, trace.hidden, trace.score};
}

void CriticConfig::validate() const {
  if (hidden == 0) throw ConfigError("critic.hidden must be >= 1");
  if (!(lr > 0.0)) throw ConfigError("critic.lr must be > 0");
  if (epochs < 1) throw ConfigError("critic.epochs must be >= 1");
  if (batch_size < 1) throw ConfigError("critic.batch_size must be >= 1");
  if (!(init_output > 0.0)) throw ConfigError("critic.init_output must be > 0");
}

CriticConfig CriticConfig::from_config(const KeyValueConfig& cfg) {
  CriticConfig c;
  c.hidden = static_cast<std::size_t>(cfg.get_int("critic.hidden", static_cast<std::int64_t>(c.hidden)));
  c.lr = cfg.get_double("critic.lr", c.lr);
  c.epochs = static_cast<int>(cfg.get_int("critic.epochs", c.epochs));
  c.batch_size = static_cast<int>(cfg.get_int("critic.batch_size", c.batch_size));
  c.clip_norm = cfg.get_double("critic.clip_norm", c.clip_norm);
  c.validate();
  return c;
}

CriticModel init_critic(std::size_t d_x, std::size_t d_h, const CriticConfig& cfg) {
  cfg.validate();
  CriticModel m;
  m.d_x = d_x;
  m.d_h = d_h;
  m.hidden = cfg.hidden;
  const std::size_t in = m.input_dim();
  m.W1 = rec::Tensor(in, cfg.hidden);
  m.b1 = rec::Tensor(cfg.hidden, 1);
  m.w2 = rec::Tensor(cfg.hidden, 1);
  m.b2 = rec::Tensor(1, 1);
  auto rng = CounterRng::substream(cfg.seed, "critic/init");
  const double sd_x = 0.1;
  const double sd_dense = std::sqrt(2.0 / static_cast<double>(d_h + 1));
  for (std::size_t i = 0; i < in; ++i) {
    const double sd = i < d_x ? sd_x : sd_dense;
    for (std::size_t j = 0; j < cfg.hidden; ++j) m.W1(i, j) = sd * rng.normal();
  }
  for (auto& b : m.b1.v) b = 0.01;
  for (auto& w : m.w2.v) w = 0.1 * rng.normal() / std::sqrt(static_cast<double>(cfg.hidden));
  m.b2.v[0] = std::log(std::expm1(cfg.init_output));
  return m;
}

namespace {

void check(const CriticModel& m, const CriticInput& z) {
  if (z.x.dim != m.d_x || z.h.size() != m.d_h) {
    throw ShapeError("critic input [" + std::to_string(z.x.dim) + " | " + std::to_string(z.h.size()) +
                     " | 1] does not match critic [" + std::to_string(m.d_x) + " | " + std::to_string(m.d_h) +
                     " | 1]");
  }
}

// Pre-activations of the hidden layer.
void hidden_pre(const CriticModel& m, const CriticInput& z, std::vector<double>& z1) {
  const std::size_t H = m.hidden;
  z1.assign(m.b1.v.begin(), m.b1.v.end());
  auto add_row = [&](std::size_t i, double v) {
    const double* row = &m.W1.v[i * H];
    for (std::size_t j = 0; j < H; ++j) z1[j] += v * row[j];
  };
  for (const auto& [i, v] : z.x.entries) add_row(i, v);
  for (std::size_t k = 0; k < m.d_h; ++k) {
    if (z.h[k] != 0.0) add_row(m.d_x + k, z.h[k]);
  }
  add_row(m.d_x + m.d_h, z.f);
}

}  // namespace

double u_point(const CriticModel& m, const CriticInput& z) {
  check(m, z);
  std::vector<double> z1;
  hidden_pre(m, z, z1);
  double out = m.b2.v[0];
  for (std::size_t j = 0; j < m.hidden; ++j) out += m.w2.v[j] * (z1[j] > 0.0 ? z1[j] : 0.0);
  return rec::softplus(out);
}

double critic_loss_grad(const CriticModel& m, const CriticInput& z, double e, CriticModel& g, double weight) {
  check(m, z);
  const std::size_t H = m.hidden;
  std::vector<double> z1;
  hidden_pre(m, z, z1);
  double out = m.b2.v[0];
  for (std::size_t j = 0; j < H; ++j) out += m.w2.v[j] * (z1[j] > 0.0 ? z1[j] : 0.0);
  const double gz = rec::softplus(out);
  const double r = gz - e;
  const double dout = weight * 2.0 * r * rec::sigmoid(out);
  g.b2.v[0] += dout;
  std::vector<double> dz1(H);
  for (std::size_t j = 0; j < H; ++j) {
    const bool on = z1[j] > 0.0;
    g.w2.v[j] += dout * (on ? z1[j] : 0.0);
    dz1[j] = on ? dout * m.w2.v[j] : 0.0;
    g.b1.v[j] += dz1[j];
  }
  auto add_row = [&](std::size_t i, double v) {
    double* row = &g.W1.v[i * H];
    for (std::size_t j = 0; j < H; ++j) row[j] += v * dz1[j];
  };
  for (const auto& [i, v] : z.x.entries) add_row(i, v);
  for (std::size_t k = 0; k < m.d_h; ++k) {
    if (z.h[k] != 0.0) add_row(m.d_x + k, z.h[k]);
  }
  add_row(m.d_x + m.d_h, z.f);
  return r * r;
}

CriticModel train_critic(std::span<const CriticSample> samples, const CriticConfig& cfg, const CriticModel* warm) {
  cfg.validate();
  if (samples.empty()) throw ConfigError("train_critic needs at least one error sample");
  const CriticInput& z0 = *samples.front().z;
  CriticModel m = warm ? *warm : init_critic(z0.x.dim, z0.h.size(), cfg);
  CriticModel g = m;
  auto zero = [](rec::Tensor& t) { std::fill(t.v.begin(), t.v.end(), 0.0); };
  zero(g.W1);
  zero(g.b1);
  zero(g.w2);
  zero(g.b2);

  const std::size_t H = m.hidden;
  const std::size_t dense_from = m.d_x;
  const std::size_t in = m.input_dim();
  std::vector<std::size_t> order(samples.size());
  std::vector<std::uint32_t> touched;
  for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
    std::iota(order.begin(), order.end(), std::size_t{0});
    auto rng = CounterRng::substream(cfg.seed, "critic/shuffle", static_cast<std::uint64_t>(epoch));
    rng.shuffle(order);
    for (std::size_t start = 0; start < order.size(); start += static_cast<std::size_t>(cfg.batch_size)) {
      const std::size_t end = std::min(order.size(), start + static_cast<std::size_t>(cfg.batch_size));
      const double w = 1.0 / static_cast<double>(end - start);
      touched.clear();
      for (std::size_t b = start; b < end; ++b) {
        const CriticSample& s = samples[order[b]];
        critic_loss_grad(m, *s.z, s.e, g, w);
        for (const auto& [i, v] : s.z->x.entries) touched.push_back(i);
      }
      std::sort(touched.begin(), touched.end());
      touched.erase(std::unique(touched.begin(), touched.end()), touched.end());

      double n2 = 0.0;
      auto row_norm = [&](std::size_t i) {
        for (std::size_t j = 0; j < H; ++j) n2 += g.W1.v[i * H + j] * g.W1.v[i * H + j];
      };
      for (auto i : touched) row_norm(i);
      for (std::size_t i = dense_from; i < in; ++i) row_norm(i);
      for (double x : g.b1.v) n2 += x * x;
      for (double x : g.w2.v) n2 += x * x;
      n2 += g.b2.v[0] * g.b2.v[0];
      double s = cfg.lr;
      if (cfg.clip_norm > 0.0 && std::sqrt(n2) > cfg.clip_norm) s *= cfg.clip_norm / std::sqrt(n2);

      auto row_step = [&](std::size_t i) {
        for (std::size_t j = 0; j < H; ++j) {
          m.W1.v[i * H + j] -= s * g.W1.v[i * H + j];
          g.W1.v[i * H + j] = 0.0;
        }
      };
      for (auto i : touched) row_step(i);
      for (std::size_t i = dense_from; i < in; ++i) row_step(i);
      for (std::size_t j = 0; j < H; ++j) {
        m.b1.v[j] -= s * g.b1.v[j];
        m.w2.v[j] -= s * g.w2.v[j];
        g.b1.v[j] = g.w2.v[j] = 0.0;
      }
      m.b2.v[0] -= s * g.b2.v[0];
      g.b2.v[0] = 0.0;
    }
  }
  return m;
}

}  // namespace uncerank::unc
