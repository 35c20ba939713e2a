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

#include "metrics/engagement.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include "common/errors.hpp"
#include "common/io.hpp"

namespace uncerank::met {

std::string fmt_metric(const Metric& m) { return m ? io::fmt(*m) : "NA"; }

EngagementReport engagement_report(std::span<const sim::ImpressionEvent> events, const EngagementScope& scope) {
  if (scope.last_day < scope.first_day) throw ConfigError("engagement window is empty");
  std::set<int> pop(scope.users.begin(), scope.users.end());
  const int hlt_from = scope.last_day - 6;

  double watch = 0.0, valuable = 0.0, hlt_watch = 0.0;
  std::map<std::pair<int, int>, std::set<int>> tags_by_user_day;
  std::map<int, std::map<int, double>> watch_by_user_tag;
  for (const auto& e : events) {
    if (!pop.count(e.user_id)) continue;
    if (e.day >= hlt_from && e.day <= scope.last_day) hlt_watch += e.watch_minutes;
    if (e.day < scope.first_day || e.day > scope.last_day) continue;
    watch += e.watch_minutes;
    if (e.valuable) valuable += e.watch_minutes;
    tags_by_user_day[{e.user_id, e.day}].insert(e.category_tag);
    if (e.watch_minutes > 0.0) watch_by_user_tag[e.user_id][e.category_tag] += e.watch_minutes;
  }

  EngagementReport r;
  r.live_watch_time = watch;
  if (watch > 0.0) r.vwr = valuable / watch;
  if (hlt_from >= 1 && !pop.empty()) r.hlt7 = hlt_watch / (7.0 * static_cast<double>(pop.size()));
  if (!tags_by_user_day.empty()) {
    double s = 0.0;
    for (const auto& [k, tags] : tags_by_user_day) s += static_cast<double>(tags.size());
    r.show_tag_per_user = s / static_cast<double>(tags_by_user_day.size());
  }
  if (!watch_by_user_tag.empty()) {
    std::size_t dominated = 0;
    for (const auto& [u, by_tag] : watch_by_user_tag) {
      double total = 0.0, top = 0.0;
      for (const auto& [t, w] : by_tag) {
        total += w;
        top = std::max(top, w);
      }
      if (top > 0.8 * total) ++dominated;
    }
    r.top1_tag_uv_ratio = static_cast<double>(dominated) / static_cast<double>(watch_by_user_tag.size());
  }
  return r;
}

std::vector<int> users_in_segment(const sim::WorldState& world, sim::Segment s) {
  std::vector<int> out;
  for (const auto& u : world.users) {
    if (u.segment == s) out.push_back(u.user_id);
  }
  return out;
}

Metric hlt_efficiency(const EngagementReport& arm, const EngagementReport& control) {
  if (!arm.hlt7 || !control.hlt7 || !arm.live_watch_time || !control.live_watch_time) return std::nullopt;
  const double d_lwt = *arm.live_watch_time - *control.live_watch_time;
  if (d_lwt == 0.0) return std::nullopt;
  return -(*arm.hlt7 - *control.hlt7) / d_lwt;
}

Metric relative_lift(const Metric& arm, const Metric& control) {
  if (!arm || !control || *control == 0.0) return std::nullopt;
  return (*arm - *control) / std::abs(*control);
}

}  // namespace uncerank::met
