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

#include "harness/commands.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>

#include "calibration/calibration.hpp"
#include "common/errors.hpp"
#include "common/io.hpp"
#include "harness/evaluation.hpp"
#include "metrics/engagement.hpp"
#include "recmodel/checkpoint_io.hpp"

namespace uncerank::harness {

namespace fs = std::filesystem;

ExperimentConfig load_experiment(const fs::path& path, const std::map<std::string, std::string>& overrides) {
  KeyValueConfig kv = KeyValueConfig::load(path);
  for (const auto& [k, v] : overrides) kv.set(k, v);
  return ExperimentConfig::from_config(kv);
}

namespace {

using Clock = std::chrono::steady_clock;

class Timings {
 public:
  void mark(const std::string& phase, Clock::time_point since) {
    const double s = std::chrono::duration<double>(Clock::now() - since).count();
    text_ += phase + " = " + io::fmt(std::round(s * 1000.0) / 1000.0) + "\n";
  }
  const std::string& str() const { return text_; }

 private:
  std::string text_;
};

std::string run_comment(const ExperimentConfig& cfg) { return "run_id=" + cfg.run_id(); }

void put(const ExperimentConfig& cfg, const std::string& name, const std::string& text) {
  io::write_atomic(cfg.out_dir / name, text);
}

std::string codes_row(long long event_id, const rec::FeatureCodes& c) {
  return io::fmt(event_id) + "," + io::fmt(static_cast<long long>(c.user_bucket)) + "," +
         io::fmt(static_cast<long long>(c.item_bucket)) + "," + io::fmt(static_cast<long long>(c.tag)) + "," +
         io::fmt(static_cast<long long>(c.age_bucket)) + "," + io::fmt(c.lau);
}

const std::vector<std::string> kFeatureHeader{"event_id", "user_bucket", "item_bucket", "tag", "age_bucket",
                                              "segment_bit"};

Rollout pipeline_rollout(const ExperimentConfig& cfg) {
  return run_rollout(cfg, variant_by_name(cfg.policy_mode), 0, Needs::all(), true);
}

void write_simulation(const ExperimentConfig& cfg, const Rollout& r) {
  const auto& layout = cfg.world.layout;
  io::CsvWriter events({"day", "user_id", "item_id", "stream_age_min", "clicked", "valuable", "watch_minutes"},
                       run_comment(cfg));
  io::CsvWriter features(kFeatureHeader, run_comment(cfg));
  for (const auto& e : r.events) {
    events.row(e.day, e.user_id, e.item_id, e.stream_age_min, e.clicked, e.valuable, e.watch_minutes);
    features.raw_row({codes_row(e.event_id, layout.decode(e.features))});
  }
  io::CsvWriter slates({"day", "user_id", "position", "item_id", "r", "u_point", "u_prob", "risky", "r_final", "mode"},
                       run_comment(cfg));
  for (const auto& s : r.system->slate_log()) {
    slates.row(s.day, s.user_id, s.position, s.item_id, s.cand.r, s.cand.u_point, s.cand.u_prob, s.cand.risky,
               s.cand.r_final, std::string(s.mode));
  }
  long n_lau = 0, churned = 0;
  for (const auto& u : r.world.users) n_lau += u.segment == sim::Segment::LAU;
  for (auto c : r.world.churned) churned += c;
  std::string world;
  world += "run_id = " + cfg.run_id() + "\n";
  world += "seed = " + std::to_string(cfg.seed) + "\n";
  world += "days = " + std::to_string(cfg.days) + "\n";
  world += "n_users = " + std::to_string(r.world.users.size()) + "\n";
  world += "n_lau = " + std::to_string(n_lau) + "\n";
  world += "n_hau = " + std::to_string(static_cast<long>(r.world.users.size()) - n_lau) + "\n";
  world += "n_streams = " + std::to_string(r.world.streams.size()) + "\n";
  world += "churned = " + std::to_string(churned) + "\n";
  world += "events = " + std::to_string(r.events.size()) + "\n";
  world += "stream_checksum = " + std::to_string(r.world.stream_checksum) + "\n";
  io::ensure_dir(cfg.out_dir);
  put(cfg, "events.csv", events.str());
  put(cfg, "features.csv", features.str());
  put(cfg, "slates.csv", slates.str());
  put(cfg, "world.txt", world);
}

void write_training(const ExperimentConfig& cfg, const Rollout& r) {
  io::CsvWriter errors({"day", "e", "f", "y"}, run_comment(cfg));
  io::CsvWriter efeat(kFeatureHeader, run_comment(cfg));
  io::CsvWriter scores({"day", "user_id", "item_id", "u_point", "u_prob", "u_ensemble", "u_mcdropout", "f", "mu_true"},
                       run_comment(cfg));
  for (const auto& s : r.system->scores()) {
    errors.row(s.day, s.e, s.f, s.y);
    efeat.raw_row({codes_row(s.event_id, s.codes)});
    scores.row(s.day, s.user_id, s.item_id, s.u_point, s.u_prob, s.u_ensemble, s.u_mcdropout, s.f, s.mu_true);
  }
  io::CsvWriter cal({"day", "event_id", "u_point", "u_prob", "u_ensemble", "u_mcdropout"}, run_comment(cfg));
  for (const auto& c : r.system->calibration_scores()) {
    cal.row(c.day, c.event_id, c.u_point, c.u_prob, c.u_ensemble, c.u_mcdropout);
  }
  io::ensure_dir(cfg.out_dir / "checkpoints");
  rec::TrainConfig tc = cfg.train;
  for (const auto& ck : r.system->checkpoints()) {
    char name[32];
    std::snprintf(name, sizeof name, "day_%02d", ck.day);
    rec::save_checkpoint(cfg.out_dir / "checkpoints" / (std::string(name) + ".ckpt"), ck);
    io::write_atomic(cfg.out_dir / "checkpoints" / (std::string(name) + ".txt"), rec::checkpoint_manifest(ck, tc));
  }
  put(cfg, "error_samples.csv", errors.str());
  put(cfg, "error_features.csv", efeat.str());
  put(cfg, "scores.csv", scores.str());
  put(cfg, "calibration_scores.csv", cal.str());
}

std::string file_run_id(const io::CsvTable& t, const std::string& file) {
  for (const auto& c : t.comments) {
    if (c.rfind("run_id=", 0) == 0) return c.substr(7);
  }
  throw ProtocolError(file + " carries no run_id");
}

io::CsvTable read_output(const ExperimentConfig& cfg, const std::string& name) {
  const fs::path p = cfg.out_dir / name;
  if (!fs::exists(p)) throw IoError("missing input file " + p.string());
  io::CsvTable t = io::read_csv(p);
  const std::string id = file_run_id(t, name);
  if (id != cfg.run_id()) {
    throw ProtocolError(name + " belongs to run " + id + ", not to this configuration's run " + cfg.run_id());
  }
  return t;
}

std::vector<double> col(const io::CsvTable& t, const std::string& name) {
  const std::size_t c = t.column(name);
  std::vector<double> v;
  v.reserve(t.rows.size());
  for (const auto& r : t.rows) v.push_back(io::to_double(r[c]));
  return v;
}

std::string opt(const std::optional<double>& v) { return v ? io::fmt(*v) : "NA"; }

}  // namespace

std::string write_manifest(const ExperimentConfig& cfg, const fs::path& dir) {
  std::vector<fs::path> files;
  for (const auto& ent : fs::recursive_directory_iterator(dir)) {
    if (!ent.is_regular_file()) continue;
    const auto rel = fs::relative(ent.path(), dir);
    const std::string s = rel.generic_string();
    if (s == "manifest.txt" || s == "timings.txt" || s.find(".tmp") != std::string::npos) continue;
    files.push_back(rel);
  }
  std::sort(files.begin(), files.end());
  std::string m;
  m += "code_version = " + std::string(kCodeVersion) + "\n";
  m += "run_id = " + cfg.run_id() + "\n";
  // The output location is not part of what was computed.
  std::string canon;
  for (const auto& [k, v] : cfg.source.entries()) {
    if (k != "out_dir") canon += k + "=" + v + "\n";
  }
  m += "config_sha256 = " + io::sha256_hex(canon) + "\n";
  m += "seed = " + std::to_string(cfg.seed) + "\n";
  for (const auto& f : files) m += "file " + f.generic_string() + " sha256=" + io::sha256_file(dir / f) + "\n";
  io::write_atomic(dir / "manifest.txt", m);
  return m;
}

void cmd_simulate(const ExperimentConfig& cfg) {
  Timings t;
  const auto t0 = Clock::now();
  const Rollout r = pipeline_rollout(cfg);
  t.mark("rollout_s", t0);
  write_simulation(cfg, r);
  write_manifest(cfg, cfg.out_dir);
  put(cfg, "timings.txt", t.str());
}

void cmd_train(const ExperimentConfig& cfg) {
  Timings t;
  const auto t0 = Clock::now();
  const Rollout r = pipeline_rollout(cfg);
  t.mark("rollout_s", t0);
  io::ensure_dir(cfg.out_dir);
  write_training(cfg, r);
  write_manifest(cfg, cfg.out_dir);
  put(cfg, "timings.txt", t.str());
}

void cmd_calibrate(const ExperimentConfig& cfg) {
  const io::CsvTable t = read_output(cfg, "calibration_scores.csv");
  const auto day = col(t, "day");
  const auto point = col(t, "u_point");
  const auto prob = col(t, "u_prob");
  if (day.empty()) throw DataError("calibration_scores.csv is empty");
  const auto [lo, hi] = std::minmax_element(day.begin(), day.end());
  const auto th = cal::calibrate(point, prob, cfg.q, cfg.n_min, static_cast<int>(*lo), static_cast<int>(*hi));
  cal::save_thresholds(cfg.out_dir / "thresholds.txt", th);
  write_manifest(cfg, cfg.out_dir);
}

void cmd_eval(const ExperimentConfig& cfg) {
  const io::CsvTable scores = read_output(cfg, "scores.csv");
  const io::CsvTable errors = read_output(cfg, "error_samples.csv");
  const io::CsvTable efeat = read_output(cfg, "error_features.csv");
  const io::CsvTable events = read_output(cfg, "events.csv");
  const io::CsvTable feats = read_output(cfg, "features.csv");
  if (scores.rows.empty() || events.rows.empty()) throw DataError("nothing to evaluate: empty logs");
  if (scores.rows.size() != errors.rows.size() || scores.rows.size() != efeat.rows.size()) {
    throw ProtocolError("scores.csv, error_samples.csv and error_features.csv are not row-aligned");
  }
  if (events.rows.size() != feats.rows.size()) throw ProtocolError("events.csv and features.csv are not row-aligned");

  // Table-1 and figure analogs.
  std::vector<ScoreRow> rows(scores.rows.size());
  {
    const auto d = col(scores, "day"), d2 = col(errors, "day"), f = col(scores, "f"), f2 = col(errors, "f");
    const auto up = col(scores, "u_point"), ub = col(scores, "u_prob"), ue = col(scores, "u_ensemble"),
               um = col(scores, "u_mcdropout"), e = col(errors, "e"), ab = col(efeat, "age_bucket");
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (d[i] != d2[i] || f[i] != f2[i]) throw ProtocolError("score and error rows disagree at row " + std::to_string(i));
      rows[i].day = static_cast<int>(d[i]);
      rows[i].u_point = up[i];
      rows[i].u_prob = ub[i];
      rows[i].u_ensemble = ue[i];
      rows[i].u_mcdropout = um[i];
      rows[i].e = e[i];
      rows[i].codes.age_bucket = static_cast<std::uint32_t>(ab[i]);
    }
  }
  const auto& edges = cfg.world.layout.age_edges;
  const EvalSummary s = evaluate(eval_input(rows), edges);

  io::CsvWriter t1({"estimator", "n", "pearson", "spearman", "aurc", "base_risk"}, run_comment(cfg));
  for (const auto& r : s.table1) {
    t1.row(r.estimator, static_cast<long long>(r.n), opt(r.pearson), opt(r.spearman), r.aurc, r.base_risk);
  }
  auto deciles = [&](const std::vector<met::DecileRow>& d) {
    io::CsvWriter w({"bin", "mean_u", "mse"}, run_comment(cfg));
    for (const auto& r : d) w.row(r.bin, r.mean_u, r.mse);
    return w.str();
  };
  auto ages = [&](const met::AgeTrend& a) {
    io::CsvWriter w({"age_bucket", "mean_u", "rmse"}, run_comment(cfg));
    for (const auto& r : a.rows) w.row(r.bucket, r.mean_u, r.rmse);
    return w.str();
  };

  // Engagement proxies over the served logs.
  std::vector<sim::ImpressionEvent> evs(events.rows.size());
  {
    const auto d = col(events, "day"), u = col(events, "user_id"), it = col(events, "item_id"),
               cl = col(events, "clicked"), va = col(events, "valuable"), wm = col(events, "watch_minutes"),
               tag = col(feats, "tag"), seg = col(feats, "segment_bit");
    for (std::size_t i = 0; i < evs.size(); ++i) {
      evs[i].day = static_cast<int>(d[i]);
      evs[i].user_id = static_cast<int>(u[i]);
      evs[i].item_id = static_cast<int>(it[i]);
      evs[i].clicked = cl[i] != 0.0;
      evs[i].valuable = va[i] != 0.0;
      evs[i].watch_minutes = wm[i];
      evs[i].category_tag = static_cast<int>(tag[i]);
      evs[i].segment = seg[i] != 0.0 ? sim::Segment::LAU : sim::Segment::HAU;
    }
  }
  const sim::WorldState world = sim::build_world(cfg.world, world_seed(cfg.seed, 0));
  met::EngagementScope scope;
  scope.first_day = 1;
  scope.last_day = cfg.days;
  for (const auto& u : world.users) scope.users.push_back(u.user_id);
  const met::EngagementReport all = met::engagement_report(evs, scope);
  const ArmReports arms = arm_reports(cfg, world, evs);

  io::CsvWriter rep({"metric", "value"}, run_comment(cfg));
  for (const auto& r : s.table1) {
    rep.row("pearson_" + r.estimator, opt(r.pearson));
    rep.row("spearman_" + r.estimator, opt(r.spearman));
    rep.row("aurc_" + r.estimator, r.aurc);
  }
  rep.row(std::string("base_risk"), s.table1.front().base_risk);
  auto engagement = [&](const std::string& prefix, const met::EngagementReport& e) {
    rep.row(prefix + "hlt7_proxy", met::fmt_metric(e.hlt7));
    rep.row(prefix + "vwr_proxy", met::fmt_metric(e.vwr));
    rep.row(prefix + "show_tag_per_user", met::fmt_metric(e.show_tag_per_user));
    rep.row(prefix + "top1_tag_uv_ratio", met::fmt_metric(e.top1_tag_uv_ratio));
    rep.row(prefix + "live_watch_time", met::fmt_metric(e.live_watch_time));
  };
  engagement("", all);
  engagement("lau_", arms.lau);
  engagement("hau_", arms.hau);
  // A single arm has no comparison point.
  rep.row(std::string("hlt_efficiency"), std::string("NA"));

  put(cfg, "table1.csv", t1.str());
  put(cfg, "deciles_point.csv", deciles(s.deciles_point));
  put(cfg, "deciles_prob.csv", deciles(s.deciles_prob));
  put(cfg, "age_point.csv", ages(s.age_point));
  put(cfg, "age_prob.csv", ages(s.age_prob));
  put(cfg, "report.csv", rep.str());
  write_manifest(cfg, cfg.out_dir);
}

void cmd_ablate(const ExperimentConfig& cfg) {
  Timings t;
  const auto t0 = Clock::now();
  const AblationResult res = run_ablation(cfg, cfg.variants);
  t.mark("ablation_s", t0);
  io::CsvWriter table({"variant", "arm", "metric", "n", "mean", "ci_lo", "ci_hi", "ci_excludes_zero"},
                      run_comment(cfg));
  io::CsvWriter runs({"variant", "metric", "index", "value"}, run_comment(cfg));
  for (const auto& c : res.cells) {
    if (c.values.empty()) {
      table.row(c.variant, c.arm, c.metric, 0LL, std::string("NA"), std::string("NA"), std::string("NA"),
                std::string("NA"));
      continue;
    }
    table.row(c.variant, c.arm, c.metric, static_cast<long long>(c.values.size()), c.ci.mean, c.ci.lo, c.ci.hi,
              c.ci.excludes_zero());
    for (std::size_t i = 0; i < c.values.size(); ++i) {
      runs.row(c.variant, c.metric, static_cast<long long>(i), c.values[i]);
    }
  }
  io::ensure_dir(cfg.out_dir);
  put(cfg, "ablation.csv", table.str());
  put(cfg, "ablation_runs.csv", runs.str());
  write_manifest(cfg, cfg.out_dir);
  put(cfg, "timings.txt", t.str());
}

void cmd_report(const ExperimentConfig& cfg) {
  Timings t;
  auto t0 = Clock::now();
  const Rollout r = pipeline_rollout(cfg);
  t.mark("rollout_s", t0);
  t0 = Clock::now();
  write_simulation(cfg, r);
  write_training(cfg, r);
  cmd_calibrate(cfg);
  cmd_eval(cfg);
  t.mark("persist_eval_s", t0);
  if (cfg.source.get_bool("report.ablate", false)) {
    t0 = Clock::now();
    cmd_ablate(cfg);
    t.mark("ablation_s", t0);
  }
  write_manifest(cfg, cfg.out_dir);
  put(cfg, "timings.txt", t.str());
}

}  // namespace uncerank::harness
