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

// Desk-scale cross network used as the point-estimate recommender.
//
//   e0 = E^T x                              embedding (d_x -> d_e)
//   c  = e0 * (w_c . e0) + b_c + e0         one explicit cross layer
//   a1 = relu(W1^T c + b1)                  first MLP layer (shared trunk ends here)
//   h  = relu(W2^T a1 + b2)                 hidden representation h(x)
//   f  = sigmoid(w_o . h + b_o)
//
// Ensemble heads branch after a1: each owns (W2, b2, w_o, b_o). The Beta
// head reads h through its own logits u = w_u . h + b_u, v = w_v . h + b_v.
// Weight matrices are stored input-major: W[i * out + j].

#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "recmodel/features.hpp"

namespace uncerank::rec {

struct Tensor {
  std::size_t rows = 0;
  std::size_t cols = 1;
  std::vector<double> v;

  Tensor() = default;
  Tensor(std::size_t r, std::size_t c) : rows(r), cols(c), v(r * c, 0.0) {}

  std::size_t size() const { return v.size(); }
  double& operator()(std::size_t i, std::size_t j) { return v[i * cols + j]; }
  double operator()(std::size_t i, std::size_t j) const { return v[i * cols + j]; }
  bool operator==(const Tensor&) const = default;
};

struct ModelDims {
  std::size_t d_x = 0;
  std::size_t d_e = 16;
  std::size_t d_h = 32;
  std::size_t n_heads = 10;
  bool operator==(const ModelDims&) const = default;
};

struct EnsembleHead {
  Tensor W2, b2, w_o, b_o;
  bool operator==(const EnsembleHead&) const = default;
};

struct BayesHead {
  Tensor w_u, b_u, w_v, b_v;
  bool operator==(const BayesHead&) const = default;
};

struct Checkpoint {
  int day = 0;
  ModelDims dims;
  double dropout_rate = 0.0;

  Tensor emb, w_c, b_c, W1, b1;  // shared trunk
  Tensor W2, b2, w_o, b_o;       // main head
  std::vector<EnsembleHead> heads;
  BayesHead bayes;

  /// Visits every parameter tensor with a stable name, in a fixed order.
  template <typename F>
  void for_each_tensor(F&& fn);
  template <typename F>
  void for_each_tensor(F&& fn) const;

  bool operator==(const Checkpoint&) const = default;
};

/// Checkpoint with freshly initialised parameters (day 0). Ensemble heads
/// get distinct seeded initialisations; the Beta head starts at zero.
Checkpoint init_checkpoint(const ModelDims& dims, std::uint64_t seed, double dropout_rate = 0.0);

/// Same shapes as `ckpt`, all zeros; used as a gradient buffer.
Checkpoint zeros_like(const Checkpoint& ckpt);

/// Hash over trunk, main-head and ensemble parameters (not the Beta head).
std::uint64_t recommender_hash(const Checkpoint& ckpt);
/// Hash over every tensor, including the Beta head.
std::uint64_t full_hash(const Checkpoint& ckpt);

struct ForwardMode {
  enum class Kind { Main, Ensemble, McDropout };
  Kind kind = Kind::Main;
  int passes = 10;
  double rate = 0.1;
  std::uint64_t seed = 0;

  static ForwardMode main() { return {}; }
  static ForwardMode ensemble() { return {Kind::Ensemble, 0, 0.0, 0}; }
  static ForwardMode mc_dropout(int passes, std::uint64_t seed, double rate = 0.1) {
    return {Kind::McDropout, passes, rate, seed};
  }
};

struct ForwardTrace {
  std::vector<double> hidden;  // h(x)
  double score = 0.5;          // f(x)
  double logit = 0.0;
  std::optional<std::vector<double>> head_scores;
  std::optional<std::vector<double>> pass_scores;
};

/// Pure. Throws ShapeError when x.dim does not match the checkpoint.
ForwardTrace forward(const Checkpoint& ckpt, const FeatureVector& x, ForwardMode mode = ForwardMode::main());

/// Output of the shared trunk (a1), used to train ensemble heads.
std::vector<double> trunk_output(const Checkpoint& ckpt, const FeatureVector& x);

/// Log loss -[y log f + (1-y) log(1-f)] for the main head; accumulates
/// d loss / d params into `grad` (scaled by `weight`). A non-empty
/// `dropout_mask` (already divided by keep probability) multiplies h.
double main_loss_grad(const Checkpoint& ckpt, const FeatureVector& x, double y, Checkpoint& grad,
                      double weight = 1.0, const std::vector<double>* dropout_mask = nullptr);

/// Log loss of ensemble head `k` given the trunk output; accumulates into
/// the head's slot in `grad`.
double head_loss_grad(const Checkpoint& ckpt, std::size_t k, const std::vector<double>& a1, double y,
                      Checkpoint& grad, double weight = 1.0);

double sigmoid(double z);
double softplus(double z);
double log_loss(double f, double y);

// --- template definitions -------------------------------------------------

template <typename F>
void Checkpoint::for_each_tensor(F&& fn) {
  fn("emb", emb);
  fn("w_c", w_c);
  fn("b_c", b_c);
  fn("W1", W1);
  fn("b1", b1);
  fn("W2", W2);
  fn("b2", b2);
  fn("w_o", w_o);
  fn("b_o", b_o);
  for (std::size_t k = 0; k < heads.size(); ++k) {
    const std::string p = "head" + std::to_string(k) + ".";
    fn(p + "W2", heads[k].W2);
    fn(p + "b2", heads[k].b2);
    fn(p + "w_o", heads[k].w_o);
    fn(p + "b_o", heads[k].b_o);
  }
  fn("bayes.w_u", bayes.w_u);
  fn("bayes.b_u", bayes.b_u);
  fn("bayes.w_v", bayes.w_v);
  fn("bayes.b_v", bayes.b_v);
}

template <typename F>
void Checkpoint::for_each_tensor(F&& fn) const {
  const_cast<Checkpoint*>(this)->for_each_tensor(
      [&](const std::string& name, Tensor& t) { fn(name, static_cast<const Tensor&>(t)); });
}

}  // namespace uncerank::rec
