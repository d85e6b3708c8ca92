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

#ifndef FCPN_CONFIG_HPP
#define FCPN_CONFIG_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "fcpn/cloud.hpp"

namespace fcpn {

enum class HeadType { voxel, point, caption };

enum class PoolMode {
  weighted,
  // Pooled branch replaced by zeros; makes the network purely local.
  zero,
};

const char* to_string(HeadType head);
const char* to_string(PoolMode mode);

/// Architecture hyperparameters. Scales double per level (octants), and
/// the input extent must be a whole number of top-level cells per axis.
struct FcpnConfig {
  double s1 = 0.15;
  double s2 = 0.30;
  double s3 = 0.60;
  Vec3 extent{2.4, 2.4, 2.4};

  // Shared point MLP; the last width is the S1 feature width.
  std::vector<std::size_t> pointnet_widths{32, 64};
  std::size_t stage2_width = 128;
  std::size_t stage3_width = 256;
  std::size_t skip_width = 64;
  std::size_t merge_width = 128;

  HeadType head = HeadType::voxel;
  std::size_t class_count = 21;
  double output_cell = 0.05;
  std::size_t head_width = 32;
  std::vector<std::size_t> point_head_widths{128, 64};
  std::size_t object_classes = 16;
  std::vector<std::size_t> caption_widths{256, 128};
  std::size_t caption_count = 25;

  double pool_radius = 1.0;
  PoolMode pool_mode = PoolMode::weighted;
  double dropout = 0.5;
  // 0 selects the S1 cell size.
  double group_radius = 0.0;
  std::size_t p_max = 64;

  double radius() const { return group_radius > 0.0 ? group_radius : s1; }
  std::size_t stage1_width() const { return pointnet_widths.empty() ? 0 : pointnet_widths.back(); }
  /// Output cells per S1 cell edge for the voxel head (S1 / output_cell).
  std::size_t upsample_factor() const;

  /// Throws ConfigError naming the offending field.
  void validate() const;

  /// Semantic voxel labeling: 15/30/60 cm scales, 2.4 m cube, 21 classes.
  static FcpnConfig voxel_preset();
  /// Part segmentation: 10/20/40 cm scales, 2.8 m cube, 50 part classes.
  static FcpnConfig part_preset();
  /// Captioning on top of the voxel backbone, 25 captions.
  static FcpnConfig caption_preset();
};

/// JSON text of every field. Parsing rejects unknown keys; missing keys keep
/// their defaults. Error messages are prefixed with `path`.
std::string config_to_json(const FcpnConfig& config, int indent = 2);
FcpnConfig config_from_json(const std::string& text, const std::string& path = "model");

}  // namespace fcpn

#endif  // FCPN_CONFIG_HPP
