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

// Checkpoint files.
//
// Binary layout (little-endian):
//   magic "UCRK" | u32 version | i32 day | u64 d_x, d_e, d_h, n_heads | f64 dropout_rate
//   u32 n_tensors, then per tensor: u32 name_len | name | u64 rows | u64 cols | f64[rows*cols]
//
// A text manifest next to each checkpoint records day, dims and the
// training hyperparameters.

#pragma once

#include <filesystem>
#include <string>

#include "recmodel/model.hpp"
#include "recmodel/train.hpp"

namespace uncerank::rec {

inline constexpr std::uint32_t kCheckpointVersion = 1;

std::string serialize_checkpoint(const Checkpoint& ckpt);
/// Throws DataError on a malformed or truncated buffer.
Checkpoint deserialize_checkpoint(const std::string& bytes);

void save_checkpoint(const std::filesystem::path& path, const Checkpoint& ckpt);
Checkpoint load_checkpoint(const std::filesystem::path& path);

std::string checkpoint_manifest(const Checkpoint& ckpt, const TrainConfig& cfg);

}  // namespace uncerank::rec
