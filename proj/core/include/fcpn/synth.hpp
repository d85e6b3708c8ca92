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

#ifndef FCPN_SYNTH_HPP
#define FCPN_SYNTH_HPP

#include <cstdint>
#include <vector>

#include "fcpn/cloud.hpp"
#include "fcpn/metrics.hpp"

namespace fcpn {

/// Point labels of synthetic rooms. 0 stays "invalid / unoccupied".
namespace synth_class {
inline constexpr std::int32_t floor = 1;
inline constexpr std::int32_t wall = 2;
inline constexpr std::int32_t chair = 3;
inline constexpr std::int32_t table = 4;
inline constexpr std::int32_t other = 5;
inline constexpr std::size_t count = 6;
}  // namespace synth_class

struct SynthSceneOptions {
  Vec3 extent{2.4, 2.4, 2.4};
  double spacing = 0.05;
  double jitter = 0.004;
  // Moves every point to the center of its snap_cell voxel and drops
  // duplicates of the same (voxel, label).
  bool snap = false;
  double snap_cell = 0.05;
  std::size_t max_tables = 2;
  std::size_t max_chairs = 2;
};

/// Procedural rooms inside [0, extent]: floor, four walls, box tables with
/// small boxes on top, and spherical chairs. Scene i only depends on
/// (seed, i).
std::vector<PointCloud> synth_scenes(std::uint64_t seed, std::size_t count, const SynthSceneOptions& options = {});

struct SynthPartOptions {
  std::size_t points = 1024;
};

/// Two-part shapes alternating between two categories:
/// category 0 = post (part 0) with a ball on top (part 1),
/// category 1 = post (part 2) under a flat slab (part 3).
std::vector<PointCloud> synth_part_shapes(std::uint64_t seed, std::size_t count, const SynthPartOptions& options = {});
PartTable synth_part_table();

struct CaptionFrame {
  PointCloud cloud;
  Vec3 origin{0, 0, 0};
  std::vector<std::int32_t> targets;  // 0/1 per caption, exactly three ones
};

/// Synthetic rooms paired with three distinct caption ids each.
std::vector<CaptionFrame> synth_caption_frames(std::uint64_t seed, std::size_t count, std::size_t caption_count,
                                               const SynthSceneOptions& options = {});

}  // namespace fcpn

#endif  // FCPN_SYNTH_HPP
