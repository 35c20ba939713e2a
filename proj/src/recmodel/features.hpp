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

#pragma once

#include <cstddef>
#include <cstdint>
#include <utility>
#include <vector>

namespace uncerank::rec {

/// Sparse view of a fixed-dimension real feature vector. Entries are
/// (index, value) pairs with strictly increasing indices.
struct FeatureVector {
  std::size_t dim = 0;
  std::vector<std::pair<std::uint32_t, double>> entries;

  std::vector<double> dense() const;
  bool operator==(const FeatureVector&) const = default;
};

/// Block indices of one encoded impression; the fixed-width sidecar row.
struct FeatureCodes {
  std::uint32_t user_bucket = 0;
  std::uint32_t item_bucket = 0;
  std::uint32_t tag = 0;
  std::uint32_t age_bucket = 0;
  bool lau = false;
};

/// [user hashed one-hot | item hashed one-hot | tag one-hot | age bucket one-hot | segment bit]
struct FeatureLayout {
  std::size_t user_buckets = 1024;
  std::size_t item_buckets = 256;
  std::size_t n_tags = 8;
  // Upper-exclusive bucket edges in minutes; the last bucket is open-ended.
  std::vector<long> age_edges{120, 360, 720, 1440, 2880, 5760};

  std::size_t n_age_buckets() const { return age_edges.size() + 1; }
  std::size_t dim() const { return user_buckets + item_buckets + n_tags + n_age_buckets() + 1; }

  std::size_t age_bucket(long age_min) const;
  FeatureCodes codes(int user_id, int item_id, int tag, long age_min, bool lau) const;
  FeatureVector encode(const FeatureCodes& c) const;
  FeatureVector encode(int user_id, int item_id, int tag, long age_min, bool lau) const {
    return encode(codes(user_id, item_id, tag, age_min, lau));
  }
  /// Inverse of encode; throws ShapeError when `x` is not a valid encoding.
  FeatureCodes decode(const FeatureVector& x) const;
};

}  // namespace uncerank::rec
