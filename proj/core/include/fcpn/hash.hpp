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

#ifndef FCPN_HASH_HPP
#define FCPN_HASH_HPP

#include <cstdint>
#include <span>
#include <string>

namespace fcpn {

/// 64-bit FNV-1a. Used to fingerprint checkpoints and output files.
std::uint64_t fnv1a64(std::span<const std::uint8_t> bytes);
std::string hash_hex(std::uint64_t h);
std::string file_hash(const std::string& path);

}  // namespace fcpn

#endif  // FCPN_HASH_HPP
