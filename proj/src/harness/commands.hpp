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

// Subcommands behind the CLI and the C API. Each one rebuilds the run from
// config + seed, writes its files atomically into cfg.out_dir and refreshes
// manifest.txt (SHA-256 of every output file).

#pragma once

#include <filesystem>
#include <map>
#include <string>

#include "harness/experiment.hpp"
#include "harness/rollout.hpp"

namespace uncerank::harness {

/// Loads a config file and layers `overrides` (CLI flags) on top.
ExperimentConfig load_experiment(const std::filesystem::path& path, const std::map<std::string, std::string>& overrides);

void cmd_simulate(const ExperimentConfig& cfg);
void cmd_train(const ExperimentConfig& cfg);
/// Reads calibration_scores.csv from the output directory.
void cmd_calibrate(const ExperimentConfig& cfg);
/// Reads scores.csv, error_samples.csv and error_features.csv from the
/// output directory; mismatched run ids are a ProtocolError.
void cmd_eval(const ExperimentConfig& cfg);
void cmd_ablate(const ExperimentConfig& cfg);
/// simulate + train + calibrate + eval from a single rollout, plus the
/// ablation table when `report.ablate = true`.
void cmd_report(const ExperimentConfig& cfg);

/// Writes manifest.txt for every regular file in `dir` except the
/// manifest itself and timings.txt. Returns the manifest text.
std::string write_manifest(const ExperimentConfig& cfg, const std::filesystem::path& dir);

inline constexpr const char* kCodeVersion = "uncerank 0.1.0";

}  // namespace uncerank::harness
