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

// Simulator proxies for the online engagement metrics. Undefined values
// (a zero denominator) are empty optionals and print as "NA".

#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "simworld/world.hpp"

namespace uncerank::met {

using Metric = std::optional<double>;

std::string fmt_metric(const Metric& m);

struct EngagementReport {
  Metric hlt7;               // mean watch minutes per user per day over the trailing 7 days
  Metric vwr;                // valuable watch minutes / watch minutes
  Metric show_tag_per_user;  // unique tags shown per active user-day
  Metric top1_tag_uv_ratio;  // share of watching users with one tag above 80% of their watch time
  Metric live_watch_time;    // total watch minutes
};

struct EngagementScope {
  std::vector<int> users;  // population, including users who churned
  int first_day = 1;       // window for everything except hlt7
  int last_day = 1;        // hlt7 uses [last_day - 6, last_day]
};

/// Users outside the scope are ignored. hlt7 needs last_day >= 7.
EngagementReport engagement_report(std::span<const sim::ImpressionEvent> events, const EngagementScope& scope);

/// Users of one segment.
std::vector<int> users_in_segment(const sim::WorldState& world, sim::Segment s);

/// -(hlt7_arm - hlt7_ctrl) / (lwt_arm - lwt_ctrl); undefined when either
/// input is undefined or the watch-time difference is zero.
Metric hlt_efficiency(const EngagementReport& arm, const EngagementReport& control);

/// Relative lift (arm - control) / |control|; undefined on a zero control.
Metric relative_lift(const Metric& arm, const Metric& control);

}  // namespace uncerank::met
