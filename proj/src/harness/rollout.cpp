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

#include "harness/rollout.hpp"

#include <algorithm>
#include <tuple>

#include "common/errors.hpp"
#include "common/rng.hpp"

namespace uncerank::harness {

Rollout run_rollout(const ExperimentConfig& cfg, const Variant& variant, int replication, Needs needs,
                    bool keep_logs) {
  Rollout r;
  r.world = sim::build_world(cfg.world, world_seed(cfg.seed, replication));
  r.system = std::make_unique<LearningSystem>(cfg, variant, learner_seed(cfg.seed, replication), needs, keep_logs);
  LearningSystem& sys = *r.system;
  const sim::WorldState& w = r.world;
  const sim::SlateProvider provider = [&sys, &w](const sim::SlateRequest& req) { return sys.serve(req, w); };
  for (int day = 1; day <= cfg.days; ++day) {
    std::vector<sim::ImpressionEvent> ev = sim::generate_day(r.world, day, provider);
    sys.end_of_day(day, ev, r.world);
    r.events.insert(r.events.end(), std::make_move_iterator(ev.begin()), std::make_move_iterator(ev.end()));
  }
  return r;
}

ArmReports arm_reports(const ExperimentConfig& cfg, const sim::WorldState& world,
                       std::span<const sim::ImpressionEvent> events) {
  met::EngagementScope scope;
  scope.first_day = std::min(cfg.policy_start_day, cfg.days);
  scope.last_day = cfg.days;
  ArmReports a;
  scope.users = met::users_in_segment(world, sim::Segment::LAU);
  a.lau = met::engagement_report(events, scope);
  scope.users = met::users_in_segment(world, sim::Segment::HAU);
  a.hau = met::engagement_report(events, scope);
  return a;
}

const AblationCell& AblationResult::cell(const std::string& variant, const std::string& arm,
                                         const std::string& metric) const {
  for (const auto& c : cells) {
    if (c.variant == variant && c.arm == arm && c.metric == metric) return c;
  }
  throw LookupError("no ablation cell " + variant + "/" + arm + "/" + metric);
}

namespace {

struct MetricSpec {
  const char* arm;
  const char* name;
};

constexpr MetricSpec kMetrics[] = {
    {"lau", "hlt7_lift"},          {"lau", "vwr_lift"},           {"lau", "live_watch_time_lift"},
    {"lau", "hlt_efficiency"},     {"hau", "show_tag_per_user_lift"}, {"hau", "top1_tag_uv_ratio_lift"},
    {"hau", "live_watch_time_lift"},
};

met::Metric metric_value(const MetricSpec& m, const ArmReports& arm, const ArmReports& off) {
  const std::string n = m.name;
  if (std::string(m.arm) == "lau") {
    if (n == "hlt7_lift") return met::relative_lift(arm.lau.hlt7, off.lau.hlt7);
    if (n == "vwr_lift") return met::relative_lift(arm.lau.vwr, off.lau.vwr);
    if (n == "live_watch_time_lift") return met::relative_lift(arm.lau.live_watch_time, off.lau.live_watch_time);
    return met::hlt_efficiency(arm.lau, off.lau);
  }
  if (n == "show_tag_per_user_lift") return met::relative_lift(arm.hau.show_tag_per_user, off.hau.show_tag_per_user);
  if (n == "top1_tag_uv_ratio_lift") return met::relative_lift(arm.hau.top1_tag_uv_ratio, off.hau.top1_tag_uv_ratio);
  return met::relative_lift(arm.hau.live_watch_time, off.hau.live_watch_time);
}

}  // namespace

AblationResult run_ablation(const ExperimentConfig& cfg, const std::vector<std::string>& variants,
                            const ProgressFn& progress) {
  std::vector<std::string> names;
  names.push_back("off");
  for (const auto& v : variants) {
    variant_by_name(v);
    if (std::find(names.begin(), names.end(), v) == names.end()) names.push_back(v);
  }
  AblationResult res;
  std::map<std::tuple<std::string, std::string, std::string>, std::vector<double>> values;
  for (int rep = 0; rep < cfg.replications; ++rep) {
    std::map<std::string, ArmReports> reports;
    std::uint64_t checksum = 0;
    for (const auto& name : names) {
      if (progress) progress(rep, name);
      const Variant v = variant_by_name(name);
      const Rollout r = run_rollout(cfg, v, rep, Needs::for_variant(v), false);
      if (name == "off") {
        checksum = r.world.stream_checksum;
      } else if (r.world.stream_checksum != checksum) {
        throw ProtocolError("variant '" + name + "' consumed different world randomness in replication " +
                            std::to_string(rep));
      }
      reports[name] = arm_reports(cfg, r.world, r.events);
    }
    res.world_checksums.push_back(checksum);
    for (const auto& name : names) {
      for (const auto& m : kMetrics) {
        const met::Metric v = metric_value(m, reports[name], reports["off"]);
        if (v) values[{name, m.arm, m.name}].push_back(*v);
      }
    }
  }
  for (const auto& name : names) {
    for (const auto& m : kMetrics) {
      AblationCell c;
      c.variant = name;
      c.arm = m.arm;
      c.metric = m.name;
      c.values = values[{name, m.arm, m.name}];
      if (!c.values.empty()) {
        c.ci = met::bootstrap_mean_interval(c.values, 0.95, 2000, substream_key(cfg.seed, "ablation/ci"));
      }
      res.cells.push_back(std::move(c));
    }
  }
  return res;
}

}  // namespace uncerank::harness
