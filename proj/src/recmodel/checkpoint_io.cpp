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

#include "recmodel/checkpoint_io.hpp"

#include <bit>
#include <cstring>

#include "common/errors.hpp"
#include "common/io.hpp"

namespace uncerank::rec {

static_assert(std::endian::native == std::endian::little, "checkpoint format assumes a little-endian host");

namespace {

template <typename T>
void put(std::string& out, T v) {
  char buf[sizeof(T)];
  std::memcpy(buf, &v, sizeof(T));
  out.append(buf, sizeof(T));
}

class Reader {
 public:
  explicit Reader(const std::string& s) : s_(s) {}

  template <typename T>
  T get() {
    need(sizeof(T));
    T v;
    std::memcpy(&v, s_.data() + pos_, sizeof(T));
    pos_ += sizeof(T);
    return v;
  }
  std::string bytes(std::size_t n) {
    need(n);
    std::string r = s_.substr(pos_, n);
    pos_ += n;
    return r;
  }
  bool done() const { return pos_ == s_.size(); }

 private:
  void need(std::size_t n) const {
    if (s_.size() - pos_ < n) throw DataError("checkpoint truncated");
  }
  const std::string& s_;
  std::size_t pos_ = 0;
};

}  // namespace

std::string serialize_checkpoint(const Checkpoint& ckpt) {
  std::string out = "UCRK";
  put<std::uint32_t>(out, kCheckpointVersion);
  put<std::int32_t>(out, ckpt.day);
  put<std::uint64_t>(out, ckpt.dims.d_x);
  put<std::uint64_t>(out, ckpt.dims.d_e);
  put<std::uint64_t>(out, ckpt.dims.d_h);
  put<std::uint64_t>(out, ckpt.heads.size());
  put<double>(out, ckpt.dropout_rate);
  std::uint32_t n = 0;
  ckpt.for_each_tensor([&](const std::string&, const Tensor&) { ++n; });
  put<std::uint32_t>(out, n);
  ckpt.for_each_tensor([&](const std::string& name, const Tensor& t) {
    put<std::uint32_t>(out, static_cast<std::uint32_t>(name.size()));
    out += name;
    put<std::uint64_t>(out, t.rows);
    put<std::uint64_t>(out, t.cols);
    for (double x : t.v) put<double>(out, x);
  });
  return out;
}

Checkpoint deserialize_checkpoint(const std::string& bytes) {
  Reader r(bytes);
  if (r.bytes(4) != "UCRK") throw DataError("not a checkpoint file (bad magic)");
  const auto version = r.get<std::uint32_t>();
  if (version != kCheckpointVersion) throw DataError("unsupported checkpoint version " + std::to_string(version));
  Checkpoint c;
  c.day = r.get<std::int32_t>();
  c.dims.d_x = r.get<std::uint64_t>();
  c.dims.d_e = r.get<std::uint64_t>();
  c.dims.d_h = r.get<std::uint64_t>();
  c.dims.n_heads = r.get<std::uint64_t>();
  c.dropout_rate = r.get<double>();
  c.heads.resize(c.dims.n_heads);
  std::uint32_t expected = 0;
  c.for_each_tensor([&](const std::string&, Tensor&) { ++expected; });
  const auto n = r.get<std::uint32_t>();
  if (n != expected) throw DataError("checkpoint tensor count mismatch");
  c.for_each_tensor([&](const std::string& name, Tensor& t) {
    const auto len = r.get<std::uint32_t>();
    const std::string got = r.bytes(len);
    if (got != name) throw DataError("checkpoint tensor '" + got + "' where '" + name + "' was expected");
    t.rows = r.get<std::uint64_t>();
    t.cols = r.get<std::uint64_t>();
    t.v.resize(t.rows * t.cols);
    for (auto& x : t.v) x = r.get<double>();
  });
  if (!r.done()) throw DataError("trailing bytes after checkpoint");
  return c;
}

void save_checkpoint(const std::filesystem::path& path, const Checkpoint& ckpt) {
  io::write_atomic(path, serialize_checkpoint(ckpt));
}

Checkpoint load_checkpoint(const std::filesystem::path& path) { return deserialize_checkpoint(io::read_file(path)); }

std::string checkpoint_manifest(const Checkpoint& ckpt, const TrainConfig& cfg) {
  std::string s;
  s += "version = " + std::to_string(kCheckpointVersion) + "\n";
  s += "day = " + std::to_string(ckpt.day) + "\n";
  s += "d_x = " + std::to_string(ckpt.dims.d_x) + "\n";
  s += "d_e = " + std::to_string(ckpt.dims.d_e) + "\n";
  s += "d_h = " + std::to_string(ckpt.dims.d_h) + "\n";
  s += "n_heads = " + std::to_string(ckpt.heads.size()) + "\n";
  s += "dropout_rate = " + io::fmt(ckpt.dropout_rate) + "\n";
  s += "train.lr = " + io::fmt(cfg.lr) + "\n";
  s += "train.epochs = " + std::to_string(cfg.epochs) + "\n";
  s += "train.batch_size = " + std::to_string(cfg.batch_size) + "\n";
  s += "train.clip_norm = " + io::fmt(cfg.clip_norm) + "\n";
  s += "train.seed = " + std::to_string(cfg.seed) + "\n";
  return s;
}

}  // namespace uncerank::rec
