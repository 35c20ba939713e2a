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

#include "unckit/bayes_head.hpp"

#include <algorithm>
#include <numeric>

#include "common/errors.hpp"
#include "common/rng.hpp"

namespace uncerank::unc {

void BayesConfig::validate() const {
  if (!(lr > 0.0)) throw ConfigError("bayes.lr must be > 0");
  if (epochs < 1) throw ConfigError("bayes.epochs must be >= 1");
  if (batch_size < 1) throw ConfigError("bayes.batch_size must be >= 1");
}

BayesConfig BayesConfig::from_config(const KeyValueConfig& cfg) {
  BayesConfig b;
  b.lr = cfg.get_double("bayes.lr", b.lr);
  b.epochs = static_cast<int>(cfg.get_int("bayes.epochs", b.epochs));
  b.batch_size = static_cast<int>(cfg.get_int("bayes.batch_size", b.batch_size));
  b.validate();
  return b;
}

namespace {

void logits(const rec::BayesHead& hd, std::span<const double> h, double& u, double& v) {
  if (h.size() != hd.w_u.size()) throw ShapeError("Beta head width does not match hidden representation");
  u = hd.b_u.v[0];
  v = hd.b_v.v[0];
  for (std::size_t j = 0; j < h.size(); ++j) {
    u += hd.w_u.v[j] * h[j];
    v += hd.w_v.v[j] * h[j];
  }
}

}  // namespace

BetaParams beta_params(const rec::BayesHead& head, std::span<const double> h) {
  double u, v;
  logits(head, h, u, v);
  return BetaParams::from_logits(u, v);
}

double bayes_loss_grad(const rec::BayesHead& head, std::span<const double> h, int y, rec::BayesHead& grad,
                       double weight) {
  double u, v;
  logits(head, h, u, v);
  const LogitGrad lg = marginal_loglik_grad(u, v, y);
  const double du = -weight * lg.du, dv = -weight * lg.dv;
  grad.b_u.v[0] += du;
  grad.b_v.v[0] += dv;
  for (std::size_t j = 0; j < h.size(); ++j) {
    grad.w_u.v[j] += du * h[j];
    grad.w_v.v[j] += dv * h[j];
  }
  return -bayes_marginal_loglik(BetaParams::from_logits(u, v), y);
}

rec::BayesHead train_bayes_head(const rec::BayesHead& start, const std::vector<std::vector<double>>& hidden,
                                std::span<const int> y, const BayesConfig& cfg) {
  cfg.validate();
  if (hidden.empty()) throw ConfigError("train_bayes_head needs at least one event");
  if (hidden.size() != y.size()) throw ShapeError("hidden/outcome length mismatch");
  rec::BayesHead m = start;
  rec::BayesHead g = start;
  auto zero = [](rec::BayesHead& b) {
    for (rec::Tensor* t : {&b.w_u, &b.b_u, &b.w_v, &b.b_v}) std::fill(t->v.begin(), t->v.end(), 0.0);
  };
  zero(g);
  std::vector<std::size_t> order(hidden.size());
  for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
    std::iota(order.begin(), order.end(), std::size_t{0});
    auto rng = CounterRng::substream(cfg.seed, "bayes/shuffle", static_cast<std::uint64_t>(epoch));
    rng.shuffle(order);
    for (std::size_t start_i = 0; start_i < order.size(); start_i += static_cast<std::size_t>(cfg.batch_size)) {
      const std::size_t end = std::min(order.size(), start_i + static_cast<std::size_t>(cfg.batch_size));
      const double w = 1.0 / static_cast<double>(end - start_i);
      for (std::size_t b = start_i; b < end; ++b) bayes_loss_grad(m, hidden[order[b]], y[order[b]], g, w);
      for (auto [p, q] : {std::pair{&m.w_u, &g.w_u}, {&m.b_u, &g.b_u}, {&m.w_v, &g.w_v}, {&m.b_v, &g.b_v}}) {
        for (std::size_t i = 0; i < p->v.size(); ++i) p->v[i] -= cfg.lr * q->v[i];
      }
      zero(g);
    }
  }
  return m;
}

rec::BayesHead train_bayes_head(const rec::Checkpoint& ckpt, std::span<const rec::Example> examples,
                                const BayesConfig& cfg) {
  if (examples.empty()) throw ConfigError("train_bayes_head needs at least one event");
  std::vector<std::vector<double>> hidden;
  std::vector<int> y;
  hidden.reserve(examples.size());
  y.reserve(examples.size());
  for (const auto& e : examples) {
    hidden.push_back(rec::forward(ckpt, e.x).hidden);
    y.push_back(e.y);
  }
  return train_bayes_head(ckpt.bayes, hidden, y, cfg);
}

}  // namespace uncerank::unc
