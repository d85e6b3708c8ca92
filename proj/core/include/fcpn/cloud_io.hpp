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

#ifndef FCPN_CLOUD_IO_HPP
#define FCPN_CLOUD_IO_HPP

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "fcpn/cloud.hpp"

namespace fcpn {

enum class CloudFormat { ply_ascii, ply_binary_le, xyz_text, xyzl_text };

struct CloudLoadOptions {
  // When set, every label must lie in [0, class_count).
  std::optional<std::int32_t> class_count;
};

/// Guesses the format from the extension (.ply, .xyz, .xyzl). For .ply the
/// header decides between ascii and binary when loading.
CloudFormat format_from_path(const std::string& path);

/// Parses an in-memory file. For PLY input either ply_* value is accepted;
/// the header is authoritative. Malformed input raises ParseError (line or
/// byte offset attached); unsupported PLY features raise
/// UnsupportedFormatError.
PointCloud parse_cloud(std::span<const std::uint8_t> bytes, CloudFormat format, const CloudLoadOptions& options = {});
PointCloud load_cloud(const std::string& path, std::optional<CloudFormat> format = std::nullopt,
                      const CloudLoadOptions& options = {});

std::vector<std::uint8_t> serialize_cloud(const PointCloud& cloud, CloudFormat format);
void save_cloud(const std::string& path, const PointCloud& cloud, std::optional<CloudFormat> format = std::nullopt);

}  // namespace fcpn

#endif  // FCPN_CLOUD_IO_HPP
