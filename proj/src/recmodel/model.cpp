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

#include "recmodel/model.hpp"

#include <bit>
#include <cmath>

#include "common/errors.hpp"
#include "common/rng.hpp"

namespace uncerank::rec {

double sigmoid(double z) {
  if (z >= 0) return 1.0 / (1.0 + std::exp(-z));
  const double ez = std::exp(z);
  return ez / (1.0 + ez);
}

double softplus(double z) { return z > 30.0 ? z : std::log1p(std::exp(z)); }

double log_loss(double f, double y) {
  constexpr double eps = 1e-12;
  return -(y * std::log(std::max(f, eps)) + (1.0 - y) * std::log(std::max(1.0 - f, eps)));
}

namespace {

void fill_normal(Tensor& t, CounterRng& rng, double sd) {
  for (auto& x : t.v) x = sd * rng.normal();
}

struct TrunkActs {
  std::vector<double> e0, c, z1, a1;
  double s = 0.0;
};

struct HeadActs {
  std::vector<double> z2, h;
  double logit = 0.0;
  double f = 0.5;
};

void check_dim(const Checkpoint& ckpt, const FeatureVector& x) {
  if (x.dim != ckpt.dims.d_x) {
    throw ShapeError("feature dimension " + std::to_string(x.dim) + " does not match checkpoint d_x " +
                     std::to_string(ckpt.dims.d_x));
  }
}

TrunkActs run_trunk(const Checkpoint& m, const FeatureVector& x) {
  const std::size_t de = m.dims.d_e, dh = m.dims.d_h;
  TrunkActs t;
  t.e0.assign(de, 0.0);
  for (const auto& [i, v] : x.entries) {
    const double* row = &m.emb.v[static_cast<std::size_t>(i) * de];
    for (std::size_t j = 0; j < de; ++j) t.e0[j] += v * row[j];
  }
  for (std::size_t j = 0; j < de; ++j) t.s += m.w_c.v[j] * t.e0[j];
  t.c.resize(de);
  for (std::size_t j = 0; j < de; ++j) t.c[j] = t.e0[j] * t.s + m.b_c.v[j] + t.e0[j];
  t.z1.assign(m.b1.v.begin(), m.b1.v.end());
  for (std::size_t i = 0; i < de; ++i) {
    const double ci = t.c[i];
    const double* row = &m.W1.v[i * dh];
    for (std::size_t j = 0; j < dh; ++j) t.z1[j] += ci * row[j];
  }
  t.a1.resize(dh);
  for (std::size_t j = 0; j < dh; ++j) t.a1[j] = t.z1[j] > 0.0 ? t.z1[j] : 0.0;
  return t;
}

HeadActs run_head(const Tensor& W2, const Tensor& b2, const Tensor& w_o, const Tensor& b_o,
                  const std::vector<double>& a1, const std::vector<double>* mask = nullptr) {
  const std::size_t dh = b2.size();
  HeadActs a;
  a.z2.assign(b2.v.begin(), b2.v.end());
  for (std::size_t i = 0; i < a1.size(); ++i) {
    const double ai = a1[i];
    if (ai == 0.0) continue;
    const double* row = &W2.v[i * dh];
    for (std::size_t j = 0; j < dh; ++j) a.z2[j] += ai * row[j];
  }
  a.h.resize(dh);
  for (std::size_t j = 0; j < dh; ++j) a.h[j] = a.z2[j] > 0.0 ? a.z2[j] : 0.0;
  a.logit = b_o.v[0];
  for (std::size_t j = 0; j < dh; ++j) a.logit += w_o.v[j] * a.h[j] * (mask ? (*mask)[j] : 1.0);
  a.f = sigmoid(a.logit);
  return a;
}

// Backprop through one head; returns d loss / d a1.
std::vector<double> backprop_head(const Tensor& W2, const Tensor& w_o, const std::vector<double>& a1,
                                  const HeadActs& a, double dlogit, Tensor& gW2, Tensor& gb2, Tensor& gw_o,
                                  Tensor& gb_o, const std::vector<double>* mask) {
  const std::size_t dh = a.h.size();
  gb_o.v[0] += dlogit;
  std::vector<double> dz2(dh);
  for (std::size_t j = 0; j < dh; ++j) {
    const double m = mask ? (*mask)[j] : 1.0;
    gw_o.v[j] += dlogit * a.h[j] * m;
    dz2[j] = a.z2[j] > 0.0 ? dlogit * w_o.v[j] * m : 0.0;
  }
  std::vector<double> da1(a1.size(), 0.0);
  for (std::size_t i = 0; i < a1.size(); ++i) {
    const double* wrow = &W2.v[i * dh];
    double* grow = &gW2.v[i * dh];
    double acc = 0.0;
    for (std::size_t j = 0; j < dh; ++j) {
      grow[j] += a1[i] * dz2[j];
      acc += wrow[j] * dz2[j];
    }
    da1[i] = acc;
  }
  for (std::size_t j = 0; j < dh; ++j) gb2.v[j] += dz2[j];
  return da1;
}

}  // namespace

Checkpoint init_checkpoint(const ModelDims& dims, std::uint64_t seed, double dropout_rate) {
  if (dims.d_x == 0 || dims.d_e == 0 || dims.d_h == 0) throw ConfigError("model dimensions must be positive");
  const std::size_t dx = dims.d_x, de = dims.d_e, dh = dims.d_h;
  Checkpoint m;
  m.day = 0;
  m.dims = dims;
  m.dropout_rate = dropout_rate;
  m.emb = Tensor(dx, de);
  m.w_c = Tensor(de, 1);
  m.b_c = Tensor(de, 1);
  m.W1 = Tensor(de, dh);
  m.b1 = Tensor(dh, 1);
  m.W2 = Tensor(dh, dh);
  m.b2 = Tensor(dh, 1);
  m.w_o = Tensor(dh, 1);
  m.b_o = Tensor(1, 1);

  auto rng = CounterRng::substream(seed, "model/init");
  fill_normal(m.emb, rng, 0.1);
  fill_normal(m.w_c, rng, 0.01);
  fill_normal(m.W1, rng, std::sqrt(2.0 / static_cast<double>(de)));
  fill_normal(m.W2, rng, std::sqrt(2.0 / static_cast<double>(dh)));
  fill_normal(m.w_o, rng, std::sqrt(1.0 / static_cast<double>(dh)));
  // Small positive bias keeps ReLUs alive at the start.
  for (auto& b : m.b1.v) b = 0.01;
  for (auto& b : m.b2.v) b = 0.01;

  for (std::size_t k = 0; k < dims.n_heads; ++k) {
    auto hr = CounterRng::substream(seed, "model/head-init", k);
    EnsembleHead h{Tensor(dh, dh), Tensor(dh, 1), Tensor(dh, 1), Tensor(1, 1)};
    fill_normal(h.W2, hr, std::sqrt(2.0 / static_cast<double>(dh)));
    fill_normal(h.w_o, hr, std::sqrt(1.0 / static_cast<double>(dh)));
    for (auto& b : h.b2.v) b = 0.01;
    m.heads.push_back(std::move(h));
  }
  m.bayes = BayesHead{Tensor(dh, 1), Tensor(1, 1), Tensor(dh, 1), Tensor(1, 1)};
  return m;
}

Checkpoint zeros_like(const Checkpoint& ckpt) {
  Checkpoint g = ckpt;
  g.for_each_tensor([](const std::string&, Tensor& t) { std::fill(t.v.begin(), t.v.end(), 0.0); });
  return g;
}

namespace {
std::uint64_t hash_tensors(const Checkpoint& ckpt, bool include_bayes) {
  std::uint64_t h = combine(0, static_cast<std::uint64_t>(ckpt.day));
  ckpt.for_each_tensor([&](const std::string& name, const Tensor& t) {
    if (!include_bayes && name.rfind("bayes.", 0) == 0) return;
    h = combine(h, fnv1a(name));
    for (double x : t.v) h = combine(h, std::bit_cast<std::uint64_t>(x));
  });
  return h;
}
}  // namespace

std::uint64_t recommender_hash(const Checkpoint& ckpt) { return hash_tensors(ckpt, false); }
std::uint64_t full_hash(const Checkpoint& ckpt) { return hash_tensors(ckpt, true); }

std::vector<double> trunk_output(const Checkpoint& ckpt, const FeatureVector& x) {
  check_dim(ckpt, x);
  return run_trunk(ckpt, x).a1;
}

ForwardTrace forward(const Checkpoint& ckpt, const FeatureVector& x, ForwardMode mode) {
  check_dim(ckpt, x);
  const TrunkActs t = run_trunk(ckpt, x);
  const HeadActs main = run_head(ckpt.W2, ckpt.b2, ckpt.w_o, ckpt.b_o, t.a1);
  ForwardTrace tr;
  tr.hidden = main.h;
  tr.score = main.f;
  tr.logit = main.logit;
  if (mode.kind == ForwardMode::Kind::Ensemble) {
    std::vector<double> scores;
    scores.reserve(ckpt.heads.size());
    for (const auto& hd : ckpt.heads) scores.push_back(run_head(hd.W2, hd.b2, hd.w_o, hd.b_o, t.a1).f);
    tr.head_scores = std::move(scores);
  } else if (mode.kind == ForwardMode::Kind::McDropout) {
    if (mode.passes <= 0 || mode.rate < 0.0 || mode.rate >= 1.0) {
      throw ConfigError("mc dropout needs passes > 0 and rate in [0, 1)");
    }
    auto rng = CounterRng::substream(mode.seed, "model/mc-dropout");
    const double keep = 1.0 - mode.rate;
    std::vector<double> scores;
    scores.reserve(static_cast<std::size_t>(mode.passes));
    for (int p = 0; p < mode.passes; ++p) {
      double logit = ckpt.b_o.v[0];
      for (std::size_t j = 0; j < main.h.size(); ++j) {
        const bool kept = rng.uniform() < keep;
        if (kept) logit += ckpt.w_o.v[j] * main.h[j] / keep;
      }
      scores.push_back(sigmoid(logit));
    }
    tr.pass_scores = std::move(scores);
  }
  return tr;
}

double main_loss_grad(const Checkpoint& m, const FeatureVector& x, double y, Checkpoint& g, double weight,
                      const std::vector<double>* dropout_mask) {
  check_dim(m, x);
  const std::size_t de = m.dims.d_e, dh = m.dims.d_h;
  const TrunkActs t = run_trunk(m, x);
  const HeadActs a = run_head(m.W2, m.b2, m.w_o, m.b_o, t.a1, dropout_mask);
  const double loss = log_loss(a.f, y);
  const double dlogit = weight * (a.f - y);

  const std::vector<double> da1 = backprop_head(m.W2, m.w_o, t.a1, a, dlogit, g.W2, g.b2, g.w_o, g.b_o, dropout_mask);

  std::vector<double> dz1(dh);
  for (std::size_t j = 0; j < dh; ++j) dz1[j] = t.z1[j] > 0.0 ? da1[j] : 0.0;
  std::vector<double> dc(de, 0.0);
  for (std::size_t i = 0; i < de; ++i) {
    const double* wrow = &m.W1.v[i * dh];
    double* grow = &g.W1.v[i * dh];
    double acc = 0.0;
    for (std::size_t j = 0; j < dh; ++j) {
      grow[j] += t.c[i] * dz1[j];
      acc += wrow[j] * dz1[j];
    }
    dc[i] = acc;
  }
  for (std::size_t j = 0; j < dh; ++j) g.b1.v[j] += dz1[j];

  // Cross layer: c = e0 * s + b_c + e0 with s = w_c . e0.
  double dc_dot_e0 = 0.0;
  for (std::size_t i = 0; i < de; ++i) dc_dot_e0 += dc[i] * t.e0[i];
  std::vector<double> de0(de);
  for (std::size_t k = 0; k < de; ++k) {
    g.b_c.v[k] += dc[k];
    g.w_c.v[k] += t.e0[k] * dc_dot_e0;
    de0[k] = dc[k] * (t.s + 1.0) + m.w_c.v[k] * dc_dot_e0;
  }
  for (const auto& [i, v] : x.entries) {
    double* row = &g.emb.v[static_cast<std::size_t>(i) * de];
    for (std::size_t j = 0; j < de; ++j) row[j] += v * de0[j];
  }
  return loss;
}

double head_loss_grad(const Checkpoint& m, std::size_t k, const std::vector<double>& a1, double y, Checkpoint& g,
                      double weight) {
  const auto& hd = m.heads.at(k);
  auto& gh = g.heads.at(k);
  const HeadActs a = run_head(hd.W2, hd.b2, hd.w_o, hd.b_o, a1);
  backprop_head(hd.W2, hd.w_o, a1, a, weight * (a.f - y), gh.W2, gh.b2, gh.w_o, gh.b_o, nullptr);
  return log_loss(a.f, y);
}

}  // namespace uncerank::rec
