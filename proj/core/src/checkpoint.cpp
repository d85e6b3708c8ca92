/*
 * Copyright (c) 2026 The FCPN Authors. All Rights Reserved
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *      http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "fcpn/checkpoint.hpp"

#include <limits>

#include "binary_io.hpp"
#include "fcpn/error.hpp"

namespace fcpn {

const CheckpointRecord* Checkpoint::find(const std::string& name) const {
  for (const auto& r : records)
    if (r.name == name) return &r;
  return nullptr;
}

std::vector<std::uint8_t> encode_checkpoint(const Checkpoint& ckpt) {
  detail::ByteWriter w;
  w.str("FCPN");
  w.u16(Checkpoint::kVersion);
  w.u32(static_cast<std::uint32_t>(ckpt.config_blob.size()));
  w.str(ckpt.config_blob);
  w.u32(static_cast<std::uint32_t>(ckpt.records.size()));
  for (const auto& r : ckpt.records) {
    if (r.name.size() > std::numeric_limits<std::uint16_t>::max()) throw InputError("checkpoint: parameter name too long");
    if (r.shape.size() > std::numeric_limits<std::uint8_t>::max()) throw InputError("checkpoint: rank too large");
    if (shape_size(r.shape) != r.data.size()) throw DimensionError("checkpoint: record " + r.name + " size mismatch");
    w.u16(static_cast<std::uint16_t>(r.name.size()));
    w.str(r.name);
    w.u8(static_cast<std::uint8_t>(r.shape.size()));
    for (auto e : r.shape) w.u32(static_cast<std::uint32_t>(e));
    for (float v : r.data) w.f32(v);
  }
  return std::move(w.buffer());
}

Checkpoint decode_checkpoint(std::span<const std::uint8_t> bytes) {
  detail::ByteReader r(bytes, "checkpoint");
  if (r.str(4) != "FCPN") r.fail("bad magic");
  const auto version = r.u16();
  if (version != Checkpoint::kVersion) r.fail("unsupported version " + std::to_string(version));
  Checkpoint ckpt;
  const auto blob_len = r.u32();
  ckpt.config_blob = r.str(blob_len);
  const auto count = r.u32();
  for (std::uint32_t i = 0; i < count; ++i) {
    CheckpointRecord rec;
    rec.name = r.str(r.u16());
    const auto rank = r.u8();
    std::size_t n = 1;
    // Bounded by the bytes left at every step so a damaged shape cannot overflow.
    const std::size_t cap = r.remaining() / 4;
    for (std::uint8_t a = 0; a < rank; ++a) {
      rec.shape.push_back(r.u32());
      const std::size_t d = rec.shape.back();
      if (d != 0 && n > cap / d) r.fail("truncated payload for " + rec.name);
      n *= d;
    }
    if (n * 4 > r.remaining()) r.fail("truncated payload for " + rec.name);
    rec.data.resize(n);
    for (auto& v : rec.data) v = r.f32();
    ckpt.records.push_back(std::move(rec));
  }
  if (!r.at_end()) r.fail("trailing bytes");
  return ckpt;
}

void write_checkpoint(const std::string& path, const Checkpoint& ckpt) {
  detail::write_file_bytes(path, encode_checkpoint(ckpt));
}

Checkpoint read_checkpoint(const std::string& path) { return decode_checkpoint(detail::read_file_bytes(path)); }

}  // namespace fcpn
