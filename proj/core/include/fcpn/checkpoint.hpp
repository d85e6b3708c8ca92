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

#ifndef FCPN_CHECKPOINT_HPP
#define FCPN_CHECKPOINT_HPP

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "fcpn/tensor.hpp"

namespace fcpn {

/// One named parameter as stored on disk (always float32).
struct CheckpointRecord {
  std::string name;
  Shape shape;
  std::vector<float> data;
};

/// Model checkpoint file:
///   "FCPN" | version u16 | config length u32 | config UTF-8 bytes |
///   record count u32 | records...
/// where a record is name length u16 | name | rank u8 | extents u32 x rank |
/// float32 payload. All integers and floats are little-endian.
struct Checkpoint {
  static constexpr std::uint16_t kVersion = 1;

  std::string config_blob;
  std::vector<CheckpointRecord> records;

  const CheckpointRecord* find(const std::string& name) const;
};

std::vector<std::uint8_t> encode_checkpoint(const Checkpoint& ckpt);
/// Throws CorruptFileError on bad magic, unknown version or truncation.
Checkpoint decode_checkpoint(std::span<const std::uint8_t> bytes);

void write_checkpoint(const std::string& path, const Checkpoint& ckpt);
Checkpoint read_checkpoint(const std::string& path);

}  // namespace fcpn

#endif  // FCPN_CHECKPOINT_HPP
