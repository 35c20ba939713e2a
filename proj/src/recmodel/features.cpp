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

#include "recmodel/features.hpp"

#include <algorithm>

#include "common/errors.hpp"
#include "common/rng.hpp"

namespace uncerank::rec {

std::vector<double> FeatureVector::dense() const {
  std::vector<double> out(dim, 0.0);
  for (const auto& [i, v] : entries) out[i] = v;
  return out;
}

std::size_t FeatureLayout::age_bucket(long age_min) const {
  const auto it = std::upper_bound(age_edges.begin(), age_edges.end(), age_min);
  return static_cast<std::size_t>(it - age_edges.begin());
}

FeatureCodes FeatureLayout::codes(int user_id, int item_id, int tag, long age_min, bool lau) const {
  FeatureCodes c;
  c.user_bucket = static_cast<std::uint32_t>(mix64(0x5553ULL ^ static_cast<std::uint64_t>(user_id)) % user_buckets);
  c.item_bucket = static_cast<std::uint32_t>(mix64(0x4954ULL ^ static_cast<std::uint64_t>(item_id)) % item_buckets);
  c.tag = static_cast<std::uint32_t>(tag);
  c.age_bucket = static_cast<std::uint32_t>(age_bucket(age_min));
  c.lau = lau;
  return c;
}

FeatureVector FeatureLayout::encode(const FeatureCodes& c) const {
  if (c.user_bucket >= user_buckets || c.item_bucket >= item_buckets || c.tag >= n_tags ||
      c.age_bucket >= n_age_buckets()) {
    throw ShapeError("feature code out of range for layout");
  }
  FeatureVector x;
  x.dim = dim();
  std::size_t off = 0;
  x.entries.emplace_back(static_cast<std::uint32_t>(off + c.user_bucket), 1.0);
  off += user_buckets;
  x.entries.emplace_back(static_cast<std::uint32_t>(off + c.item_bucket), 1.0);
  off += item_buckets;
  x.entries.emplace_back(static_cast<std::uint32_t>(off + c.tag), 1.0);
  off += n_tags;
  x.entries.emplace_back(static_cast<std::uint32_t>(off + c.age_bucket), 1.0);
  off += n_age_buckets();
  if (c.lau) x.entries.emplace_back(static_cast<std::uint32_t>(off), 1.0);
  return x;
}

FeatureCodes FeatureLayout::decode(const FeatureVector& x) const {
  if (x.dim != dim() || x.entries.size() < 4 || x.entries.size() > 5) {
    throw ShapeError("feature vector does not match layout");
  }
  FeatureCodes c;
  const std::size_t b_item = user_buckets, b_tag = b_item + item_buckets, b_age = b_tag + n_tags,
                    b_seg = b_age + n_age_buckets();
  auto in = [](std::size_t i, std::size_t lo, std::size_t hi) { return i >= lo && i < hi; };
  const auto& e = x.entries;
  if (!in(e[0].first, 0, b_item) || !in(e[1].first, b_item, b_tag) || !in(e[2].first, b_tag, b_age) ||
      !in(e[3].first, b_age, b_seg) || (e.size() == 5 && e[4].first != b_seg)) {
    throw ShapeError("feature vector blocks out of order");
  }
  c.user_bucket = e[0].first;
  c.item_bucket = static_cast<std::uint32_t>(e[1].first - b_item);
  c.tag = static_cast<std::uint32_t>(e[2].first - b_tag);
  c.age_bucket = static_cast<std::uint32_t>(e[3].first - b_age);
  c.lau = e.size() == 5;
  return c;
}

}  // namespace uncerank::rec
