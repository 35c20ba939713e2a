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

// Acceptance suite: one PASS/FAIL line per criterion.
//
//   acceptance --config configs/default.cfg --smoke configs/smoke.cfg [--criterion N ...]
//
// Exits 0 when every selected criterion passes.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <map>
#include <numeric>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "calibration/calibration.hpp"
#include "common/config.hpp"
#include "common/io.hpp"
#include "common/rng.hpp"
#include "gradcheck.hpp"
#include "harness/commands.hpp"
#include "harness/evaluation.hpp"
#include "harness/rollout.hpp"
#include "metrics/metrics.hpp"
#include "recmodel/model.hpp"
#include "recmodel/train.hpp"
#include "simworld/world.hpp"
#include "unckit/bayes_head.hpp"
#include "unckit/beta.hpp"
#include "unckit/critic.hpp"
#include "unckit/oracle.hpp"

using namespace uncerank;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

struct Paths {
  std::string config;
  std::string smoke;
  std::string scratch;
};

std::string fmt(const char* f, double a) {
  char b[64];
  std::snprintf(b, sizeof b, f, a);
  return b;
}

harness::ExperimentConfig load(const std::string& path, const std::map<std::string, std::string>& over = {}) {
  return harness::load_experiment(path, over);
}

// ---------------------------------------------------------------------------
// 1. Beta-Bernoulli identities

Outcome beta_identities(const Paths&) {
  CounterRng rng(101);
  double worst = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const unc::BetaParams bp{1.0 + rng.uniform_open() * 50.0, 1.0 + rng.uniform_open() * 50.0};
    const auto d = unc::variance_decomposition(bp);
    worst = std::max(worst, std::abs(d.aleatoric + d.epistemic - d.total));
  }
  const double u22 = unc::u_prob({2.0, 2.0});
  Outcome o;
  o.pass = worst <= 1e-12 && u22 == 0.05;
  o.detail = "max |ale + epi - total| = " + fmt("%.2e", worst) + " (<= 1e-12), u_prob(2,2) = " + fmt("%.17g", u22);
  return o;
}

// ---------------------------------------------------------------------------
// 2. Gradients against central differences

rec::FeatureLayout grad_layout() {
  rec::FeatureLayout l;
  l.user_buckets = 16;
  l.item_buckets = 8;
  l.n_tags = 4;
  return l;
}

struct Tally {
  int probes = 0;
  int ok = 0;
  void add(double analytic, double numeric) {
    ++probes;
    ok += testing::gradient_matches(analytic, numeric) ? 1 : 0;
  }
  bool pass(int min_probes) const { return probes >= min_probes && ok == probes; }
  std::string str() const { return std::to_string(ok) + "/" + std::to_string(probes); }
};

Tally recommender_gradients() {
  Tally t;
  CounterRng rng(2024);
  const auto layout = grad_layout();
  for (int s = 0; s < 50; ++s) {
    rec::ModelDims dims;
    dims.d_x = layout.dim();
    dims.d_e = 6;
    dims.d_h = 8;
    dims.n_heads = 2;
    auto m = rec::init_checkpoint(dims, 100 + static_cast<std::uint64_t>(s));
    const auto x = layout.encode(static_cast<int>(rng.below(100)), static_cast<int>(rng.below(50)),
                                 static_cast<int>(rng.below(4)), static_cast<long>(rng.below(8000)),
                                 rng.uniform() < 0.5);
    const double y = rng.uniform() < 0.5 ? 1.0 : 0.0;
    std::vector<double> mask(dims.d_h);
    for (auto& v : mask) v = rng.uniform() < 0.9 ? 1.0 / 0.9 : 0.0;
    const std::vector<double>* mk = s % 2 ? &mask : nullptr;

    auto g = rec::zeros_like(m);
    rec::main_loss_grad(m, x, y, g, 1.0, mk);
    const auto a1 = rec::trunk_output(m, x);
    for (std::size_t k = 0; k < m.heads.size(); ++k) rec::head_loss_grad(m, k, a1, y, g, 1.0);

    std::map<std::string, rec::Tensor*> mt, gt;
    m.for_each_tensor([&](const std::string& n, rec::Tensor& v) { mt[n] = &v; });
    g.for_each_tensor([&](const std::string& n, rec::Tensor& v) { gt[n] = &v; });
    for (auto& [name, tensor] : mt) {
      if (name.rfind("bayes.", 0) == 0) continue;
      std::size_t idx;
      if (name == "emb") {
        const auto& [row, v] = x.entries[rng.below(x.entries.size())];
        idx = static_cast<std::size_t>(row) * dims.d_e + rng.below(dims.d_e);
      } else {
        idx = rng.below(tensor->v.size());
      }
      double numeric;
      if (name.rfind("head", 0) == 0) {
        const auto k = static_cast<std::size_t>(name[4] - '0');
        numeric = testing::central_difference(tensor->v[idx], [&] {
          auto scratch = rec::zeros_like(m);
          return rec::head_loss_grad(m, k, a1, y, scratch, 1.0);
        });
      } else {
        numeric = testing::central_difference(tensor->v[idx], [&] {
          auto scratch = rec::zeros_like(m);
          return rec::main_loss_grad(m, x, y, scratch, 1.0, mk);
        });
      }
      t.add(gt[name]->v[idx], numeric);
    }
  }
  return t;
}

Tally critic_gradients() {
  Tally t;
  CounterRng rng(12);
  unc::CriticConfig cfg;
  cfg.hidden = 6;
  const auto layout = grad_layout();
  for (int s = 0; s < 50; ++s) {
    cfg.seed = static_cast<std::uint64_t>(s);
    auto c = unc::init_critic(layout.dim(), 4, cfg);
    for (auto& v : c.b1.v) v = rng.normal() * 0.3;
    unc::CriticInput z;
    z.x = layout.encode(static_cast<int>(rng.below(100)), static_cast<int>(rng.below(50)),
                        static_cast<int>(rng.below(4)), static_cast<long>(rng.below(8000)), rng.uniform() < 0.5);
    z.h.resize(4);
    for (auto& v : z.h) v = std::max(0.0, rng.normal());
    z.f = rng.uniform(0.05, 0.95);
    const double e = rng.uniform();
    auto g = c;
    for (auto* p : {&g.W1, &g.b1, &g.w2, &g.b2}) std::fill(p->v.begin(), p->v.end(), 0.0);
    unc::critic_loss_grad(c, z, e, g);
    auto loss = [&] {
      auto scratch = g;
      return unc::critic_loss_grad(c, z, e, scratch);
    };
    rec::Tensor* ps[] = {&c.W1, &c.b1, &c.w2, &c.b2};
    const rec::Tensor* gs[] = {&g.W1, &g.b1, &g.w2, &g.b2};
    for (int k = 0; k < 4; ++k) {
      std::size_t j = rng.below(ps[k]->v.size());
      if (k == 0) {
        const auto& [row, v] = z.x.entries[rng.below(z.x.entries.size())];
        j = static_cast<std::size_t>(row) * cfg.hidden + rng.below(cfg.hidden);
      }
      t.add(gs[k]->v[j], testing::central_difference(ps[k]->v[j], loss));
    }
  }
  return t;
}

Tally bayes_gradients() {
  Tally t;
  CounterRng rng(6);
  const std::size_t dh = 7;
  for (int s = 0; s < 50; ++s) {
    double u = rng.uniform(-4, 4), v = rng.uniform(-4, 4);
    const int y = static_cast<int>(rng.below(2));
    const auto lg = unc::marginal_loglik_grad(u, v, y);
    auto ll = [&] { return unc::bayes_marginal_loglik(unc::BetaParams::from_logits(u, v), y); };
    t.add(lg.du, testing::central_difference(u, ll));
    t.add(lg.dv, testing::central_difference(v, ll));

    rec::BayesHead head{rec::Tensor(dh, 1), rec::Tensor(1, 1), rec::Tensor(dh, 1), rec::Tensor(1, 1)};
    for (auto* p : {&head.w_u, &head.b_u, &head.w_v, &head.b_v}) {
      for (auto& x : p->v) x = rng.normal() * 0.5;
    }
    std::vector<double> h(dh);
    for (auto& x : h) x = std::max(0.0, rng.normal());
    rec::BayesHead g{rec::Tensor(dh, 1), rec::Tensor(1, 1), rec::Tensor(dh, 1), rec::Tensor(1, 1)};
    unc::bayes_loss_grad(head, h, y, g);
    auto loss = [&] {
      auto scratch = g;
      return unc::bayes_loss_grad(head, h, y, scratch);
    };
    rec::Tensor* ps[] = {&head.w_u, &head.b_u, &head.w_v, &head.b_v};
    const rec::Tensor* gs[] = {&g.w_u, &g.b_u, &g.w_v, &g.b_v};
    for (int k = 0; k < 4; ++k) {
      const std::size_t j = rng.below(ps[k]->v.size());
      t.add(gs[k]->v[j], testing::central_difference(ps[k]->v[j], loss));
    }
  }
  return t;
}

Outcome gradients(const Paths&) {
  const auto r = recommender_gradients(), c = critic_gradients(), b = bayes_gradients();
  Outcome o;
  o.pass = r.pass(50) && c.pass(50) && b.pass(50);
  o.detail = "recommender " + r.str() + ", critic " + c.str() + ", bayes " + b.str() + " probes within 1e-5 rel";
  return o;
}

// ---------------------------------------------------------------------------
// 3. EPE decomposition against Monte Carlo on a frozen world

Outcome epe_oracle(const Paths&) {
  sim::WorldConfig wc;
  wc.n_users = 60;
  wc.n_streams = 40;
  wc.layout.user_buckets = 64;
  wc.layout.item_buckets = 32;
  const auto world = sim::build_world(wc, 31);

  struct Context {
    int user, item;
    long age;
    rec::FeatureVector x;
    double mu;
  };
  CounterRng pick(7);
  std::vector<Context> pool;
  for (int i = 0; i < 300; ++i) {
    Context c{static_cast<int>(pick.below(60)), static_cast<int>(pick.below(40)),
              static_cast<long>(pick.below(6000)), {}, 0.0};
    c.x = sim::features_for(world, c.user, c.item, c.age);
    c.mu = sim::true_ctr(world, c.user, c.item, c.age);
    pool.push_back(std::move(c));
  }
  const int n_ctx = 20, R = 20, draws = 10000, per_context = 8;
  std::vector<double> mu(n_ctx);
  for (int i = 0; i < n_ctx; ++i) mu[static_cast<std::size_t>(i)] = pool[static_cast<std::size_t>(i)].mu;

  rec::ModelDims dims;
  dims.d_x = wc.layout.dim();
  dims.d_e = 8;
  dims.d_h = 16;
  dims.n_heads = 0;
  rec::TrainConfig tc;
  tc.epochs = 3;
  tc.train_ensemble = false;

  std::vector<std::vector<double>> preds(R);
  auto retrain = [&](int r) {
    auto rng = CounterRng::substream(99, "acceptance/outcomes", static_cast<std::uint64_t>(r));
    std::vector<rec::Example> ex;
    long long id = 0;
    for (const auto& c : pool) {
      for (int k = 0; k < per_context; ++k) ex.push_back({c.x, rng.bernoulli(c.mu) ? 1 : 0, id++, 1});
    }
    tc.seed = static_cast<std::uint64_t>(r);
    const auto ck = rec::train_day(rec::init_checkpoint(dims, 500 + static_cast<std::uint64_t>(r)), 1, ex, tc).ckpt;
    std::vector<double> f;
    for (int i = 0; i < n_ctx; ++i) f.push_back(rec::forward(ck, pool[static_cast<std::size_t>(i)].x).score);
    preds[static_cast<std::size_t>(r)] = f;
    return f;
  };
  const auto rows = unc::decompose_epe_oracle(mu, retrain, R);

  auto mc = CounterRng::substream(99, "acceptance/monte-carlo");
  int agree = 0;
  double worst_z = 0.0;
  for (int i = 0; i < n_ctx; ++i) {
    double s = 0.0, s2 = 0.0;
    for (int k = 0; k < draws; ++k) {
      const double f = preds[mc.below(R)][static_cast<std::size_t>(i)];
      const double y = mc.bernoulli(mu[static_cast<std::size_t>(i)]) ? 1.0 : 0.0;
      s += (y - f) * (y - f);
      s2 += (y - f) * (y - f) * (y - f) * (y - f);
    }
    const double mean = s / draws, se = std::sqrt((s2 / draws - mean * mean) / draws);
    const auto& row = rows[static_cast<std::size_t>(i)];
    const double z = std::abs(mean - (row.bias2 + row.model_var + row.data_noise)) / se;
    worst_z = std::max(worst_z, z);
    agree += z <= 3.0 ? 1 : 0;
  }
  Outcome o;
  o.pass = agree >= 18;
  o.detail = std::to_string(agree) + "/20 contexts within 3 sigma (need >= 18), worst |z| = " + fmt("%.2f", worst_z);
  return o;
}

// ---------------------------------------------------------------------------
// Default-world rollout shared by criteria 4, 5 and 6.

struct DefaultRun {
  harness::ExperimentConfig cfg;
  harness::Rollout rollout;
  double seconds = 0.0;
};

const DefaultRun& default_run(const Paths& p) {
  static std::optional<DefaultRun> run;
  if (!run) {
    const auto t0 = std::chrono::steady_clock::now();
    DefaultRun d{load(p.config), {}, 0.0};
    d.rollout = harness::run_rollout(d.cfg, harness::variant_by_name(d.cfg.policy_mode), 0, harness::Needs::all(),
                                     true);
    d.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    run = std::move(d);
  }
  return *run;
}

// ---------------------------------------------------------------------------
// 4. Calibration coverage on an i.i.d. holdout

Outcome calibration_coverage(const Paths& p) {
  const auto& d = default_run(p);
  std::vector<std::pair<double, double>> pool;
  for (const auto& r : d.rollout.system->scores()) {
    if (std::isfinite(r.u_point) && std::isfinite(r.u_prob)) pool.push_back({r.u_point, r.u_prob});
  }
  auto rng = CounterRng::substream(d.cfg.seed, "acceptance/holdout");
  rng.shuffle(pool);
  const std::size_t n_hold = 10000;
  Outcome o;
  if (pool.size() < n_hold + static_cast<std::size_t>(d.cfg.n_min)) {
    o.detail = "only " + std::to_string(pool.size()) + " scores available";
    return o;
  }
  std::vector<double> cp, cq;
  for (std::size_t i = n_hold; i < pool.size(); ++i) {
    cp.push_back(pool[i].first);
    cq.push_back(pool[i].second);
  }
  const auto t = cal::calibrate(cp, cq, 0.95, d.cfg.n_min);
  double fp = 0.0, fq = 0.0;
  for (std::size_t i = 0; i < n_hold; ++i) {
    fp += pool[i].first > t.tau_point ? 1.0 : 0.0;
    fq += pool[i].second > t.tau_prob ? 1.0 : 0.0;
  }
  fp /= n_hold;
  fq /= n_hold;
  o.pass = std::abs(fp - 0.05) <= 0.01 && std::abs(fq - 0.05) <= 0.01;
  o.detail = "holdout flag rate point " + fmt("%.4f", fp) + ", prob " + fmt("%.4f", fq) + " (0.05 +- 0.01; " +
             std::to_string(cp.size()) + " calibration scores)";
  return o;
}

// ---------------------------------------------------------------------------
// 5. Table 1 ordering

Outcome table1_ordering(const Paths& p) {
  const auto& d = default_run(p);
  const auto in = harness::eval_input(d.rollout.system->scores());
  Outcome o;
  if (in.e.size() < 50000) {
    o.detail = "only " + std::to_string(in.e.size()) + " error samples (need 5e4)";
    return o;
  }
  const auto s = harness::evaluate(in, d.cfg.world.layout.age_edges);
  std::map<std::string, harness::EstimatorRow> row;
  for (const auto& r : s.table1) row[r.estimator] = r;
  auto sp = [&](const char* k) { return row[k].spearman.value_or(-2.0); };
  const double base_sp = std::max(sp("ensemble"), sp("mcdropout"));
  const double base_aurc = std::min(row["ensemble"].aurc, row["mcdropout"].aurc);
  bool ok = true;
  for (const char* k : {"critic", "bayes"}) {
    ok = ok && sp(k) > base_sp && sp(k) > 0.25 && row[k].aurc < row[k].base_risk && row[k].aurc < base_aurc;
  }
  o.pass = ok && d.seconds < 300.0;
  std::ostringstream os;
  os << in.e.size() << " samples; spearman/aurc";
  for (const char* k : {"critic", "bayes", "ensemble", "mcdropout"}) {
    os << " " << k << " " << fmt("%.3f", sp(k)) << "/" << fmt("%.4f", row[k].aurc);
  }
  os << "; base " << fmt("%.4f", row["critic"].base_risk) << "; rollout " << fmt("%.0f", d.seconds) << " s";
  o.detail = os.str();
  return o;
}

// ---------------------------------------------------------------------------
// 6. Decile and age trends

int nondecreasing_pairs(const std::vector<double>& v) {
  int n = 0;
  for (std::size_t i = 1; i < v.size(); ++i) n += v[i] >= v[i - 1] ? 1 : 0;
  return n;
}

int nonincreasing_pairs(const std::vector<double>& v) {
  int n = 0;
  for (std::size_t i = 1; i < v.size(); ++i) n += v[i] <= v[i - 1] ? 1 : 0;
  return n;
}

Outcome trends(const Paths& p) {
  const auto& d = default_run(p);
  const auto s = harness::evaluate(harness::eval_input(d.rollout.system->scores()), d.cfg.world.layout.age_edges);
  auto mse = [](const std::vector<met::DecileRow>& rows) {
    std::vector<double> v;
    for (const auto& r : rows) v.push_back(r.mse);
    return v;
  };
  // Buckets after the first.
  auto tail = [](const met::AgeTrend& a, bool rmse) {
    std::vector<double> v;
    for (std::size_t i = 1; i < a.rows.size(); ++i) v.push_back(rmse ? a.rows[i].rmse : a.rows[i].mean_u);
    return v;
  };
  const int dp = nondecreasing_pairs(mse(s.deciles_point)), dq = nondecreasing_pairs(mse(s.deciles_prob));
  const auto up = tail(s.age_point, false), rp = tail(s.age_point, true);
  const auto uq = tail(s.age_prob, false);
  const int n_pairs = static_cast<int>(up.size()) - 1;
  const int a_up = nonincreasing_pairs(up), a_rmse = nonincreasing_pairs(rp), a_uq = nonincreasing_pairs(uq);
  Outcome o;
  o.pass = s.deciles_point.size() == 10 && s.deciles_prob.size() == 10 && dp >= 9 && dq >= 9 && n_pairs >= 5 &&
           a_up >= 4 && a_uq >= 4 && a_rmse >= 4;
  o.detail = "decile pairs nondecreasing point " + std::to_string(dp) + "/9, prob " + std::to_string(dq) +
             "/9; age pairs nonincreasing u_point " + std::to_string(a_up) + ", u_prob " + std::to_string(a_uq) +
             ", rmse " + std::to_string(a_rmse) + " of " + std::to_string(n_pairs) + " (need 4)";
  return o;
}

// ---------------------------------------------------------------------------
// 7. AURC oracle optimality

Outcome aurc_oracle(const Paths&) {
  CounterRng rng(17);
  int instances = 0, optimal = 0;
  for (std::size_t n = 1; n <= 6; ++n) {
    for (int trial = 0; trial < 20; ++trial) {
      std::vector<double> e(n);
      for (auto& x : e) x = rng.uniform() < 0.3 ? 0.0 : rng.uniform();
      const double oracle = met::risk_coverage(e, e).aurc;
      std::vector<std::size_t> perm(n);
      std::iota(perm.begin(), perm.end(), std::size_t{0});
      bool ok = true;
      do {
        std::vector<double> u(n);
        for (std::size_t k = 0; k < n; ++k) u[perm[k]] = static_cast<double>(k);
        ok = ok && oracle <= met::risk_coverage(u, e).aurc + 1e-12;
      } while (std::next_permutation(perm.begin(), perm.end()));
      ++instances;
      optimal += ok ? 1 : 0;
    }
  }
  std::vector<double> e(1000);
  for (auto& x : e) x = rng.uniform() * rng.uniform();
  const double base = std::accumulate(e.begin(), e.end(), 0.0) / static_cast<double>(e.size());
  std::vector<double> a(200);
  std::vector<std::size_t> order(e.size());
  for (auto& x : a) {
    std::iota(order.begin(), order.end(), std::size_t{0});
    rng.shuffle(order);
    std::vector<double> u(e.size());
    for (std::size_t k = 0; k < order.size(); ++k) u[order[k]] = static_cast<double>(k);
    x = met::risk_coverage(u, e).aurc;
  }
  const double m = std::accumulate(a.begin(), a.end(), 0.0) / 200.0;
  double ss = 0.0;
  for (double x : a) ss += (x - m) * (x - m);
  const double se = std::sqrt(ss / 199.0 / 200.0);
  Outcome o;
  o.pass = optimal == instances && std::abs(m - base) <= 3.0 * se;
  o.detail = "oracle minimal on " + std::to_string(optimal) + "/" + std::to_string(instances) +
             " instances (n <= 6); shuffled AURC " + fmt("%.5f", m) + " vs base " + fmt("%.5f", base) +
             " (|z| = " + fmt("%.2f", std::abs(m - base) / se) + ")";
  return o;
}

// ---------------------------------------------------------------------------
// 8. Ablation directions

Outcome ablation(const Paths& p) {
  const auto cfg = load(p.config, {{"replications", "30"}, {"days", "14"}});
  const auto r = harness::run_ablation(cfg, {"off", "unified", "random"});
  auto ci = [&](const char* v, const char* arm, const char* m) { return r.cell(v, arm, m).ci; };
  const auto u_hlt = ci("unified", "lau", "hlt7_lift"), x_hlt = ci("random", "lau", "hlt7_lift");
  const auto u_tag = ci("unified", "hau", "show_tag_per_user_lift"), x_tag = ci("random", "hau", "show_tag_per_user_lift");
  const auto u_top = ci("unified", "hau", "top1_tag_uv_ratio_lift"), x_top = ci("random", "hau", "top1_tag_uv_ratio_lift");
  const bool a = u_hlt.lo > 0.0 && u_hlt.mean > x_hlt.mean && x_hlt.contains_zero();
  const bool random_tag = x_tag.lo > 0.0, random_top = x_top.mean < 0.0;
  const bool b = u_tag.lo > 0.0 && u_top.mean < 0.0 && !random_tag && !random_top;
  auto iv = [](const met::Interval& i) {
    return fmt("%+.4f", i.mean) + " [" + fmt("%+.4f", i.lo) + ", " + fmt("%+.4f", i.hi) + "]";
  };
  Outcome o;
  o.pass = a && b;
  o.detail = std::string("(a) ") + (a ? "ok" : "fails") + ": hlt7 lift unified " + iv(u_hlt) + ", random " +
             iv(x_hlt) + "; (b) " + (b ? "ok" : "fails") + ": show_tag lift unified " + iv(u_tag) + ", random " +
             iv(x_tag) + "; top1 lift unified " + iv(u_top) + ", random " + iv(x_top);
  return o;
}

// ---------------------------------------------------------------------------
// 9. End-to-end determinism

Outcome determinism(const Paths& p) {
  std::vector<std::string> manifests;
  for (const char* run : {"run_a", "run_b"}) {
    const fs::path out = fs::path(p.scratch) / run;
    fs::remove_all(out);
    const auto cfg = load(p.smoke, {{"out_dir", out.string()}});
    harness::cmd_report(cfg);
    manifests.push_back(io::read_file(out / "manifest.txt"));
  }
  const auto files = std::count(manifests[0].begin(), manifests[0].end(), '\n') - 4;
  Outcome o;
  o.pass = manifests[0] == manifests[1] && files > 0;
  o.detail = std::string(o.pass ? "identical" : "different") + " manifests over " + std::to_string(files) +
             " output files";
  return o;
}

struct Criterion {
  int id;
  const char* name;
  double budget_s;
  std::function<Outcome(const Paths&)> run;
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"uncerank acceptance suite"};
  Paths paths;
  std::vector<int> only;
  app.add_option("--config", paths.config, "default-world config")->required();
  app.add_option("--smoke", paths.smoke, "smoke config for the determinism check")->required();
  app.add_option("--scratch", paths.scratch, "scratch directory")->default_val("acceptance_scratch");
  app.add_option("--criterion", only, "criteria to run (default: all)");
  CLI11_PARSE(app, argc, argv);

  const std::vector<Criterion> all = {
      {1, "Beta-Bernoulli identities", 1.0, beta_identities},
      {2, "gradients match central differences", 10.0, gradients},
      {3, "EPE decomposition oracle", 60.0, epe_oracle},
      {4, "calibration coverage", 30.0, calibration_coverage},
      {5, "Table 1 ordering analog", 300.0, table1_ordering},
      {6, "decile and age trends", 300.0, trends},
      {7, "AURC oracle optimality", 10.0, aurc_oracle},
      {8, "ablation directions (R = 30, K = 14)", 900.0, ablation},
      {9, "end-to-end determinism", 30.0, determinism},
  };

  int failed = 0;
  for (const auto& c : all) {
    if (!only.empty() && std::find(only.begin(), only.end(), c.id) == only.end()) continue;
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run(paths);
    } catch (const std::exception& e) {
      o = {false, std::string("error: ") + e.what()};
    }
    const double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const bool pass = o.pass && s <= c.budget_s;
    failed += pass ? 0 : 1;
    std::printf("[%s] %d %s: %s (%.1f s, budget %.0f s)\n", pass ? "PASS" : "FAIL", c.id, c.name, o.detail.c_str(), s,
                c.budget_s);
    std::fflush(stdout);
  }
  return failed ? 1 : 0;
}
