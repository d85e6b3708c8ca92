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

#ifndef FCPN_CLI_RUN_CONFIG_HPP
#define FCPN_CLI_RUN_CONFIG_HPP

#include <cstdint>
#include <string>

#include "fcpn/augment.hpp"
#include "fcpn/config.hpp"
#include "fcpn/train.hpp"
#include "fcpn/volumes.hpp"

namespace fcpn::cli {

/// Everything a training run needs. Only the paths lack defaults.
struct RunConfig {
  FcpnConfig model = FcpnConfig::voxel_preset();
  TrainSchedule schedule;
  AugmentParams augment = AugmentParams::voxel_defaults();
  VolumeExtractionOptions volumes;
  std::size_t resample_points = 16384;
  bool freeze_backbone = true;
  std::uint64_t seed = 0;

  std::string dataset_dir;
  std::string output_dir;
  // Warm start for voxel/part runs; the frozen backbone for caption runs.
  std::string checkpoint;
};

/// Parses a run document. Recognised top-level keys: preset, model,
/// schedule, augment, volumes, resample_points, freeze_backbone, seed,
/// dataset_dir, output_dir, checkpoint. "preset" (voxel, part, caption)
/// picks the model and augmentation defaults that the other sections
/// override. Unknown keys raise ConfigError naming the full key path.
RunConfig parse_run_config(const std::string& text, const std::string& path = "config");
RunConfig load_run_config(const std::string& file);
std::string run_config_to_json(const RunConfig& config);

}  // namespace fcpn::cli

#endif  // FCPN_CLI_RUN_CONFIG_HPP
