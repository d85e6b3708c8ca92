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

#include "cli/run_config.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "fcpn/error.hpp"

namespace fcpn::cli {

namespace {

using json = nlohmann::json;

void reject_unknown(const json& j, const std::set<std::string>& known, const std::string& path) {
  if (!j.is_object()) throw ConfigError(path + ": expected an object");
  for (auto it = j.begin(); it != j.end(); ++it) {
    if (!known.count(it.key())) throw ConfigError(path + "." + it.key() + ": unknown key");
  }
}

template <typename V>
void get(const json& j, const char* key, V& out, const std::string& path) {
  if (!j.contains(key)) return;
  try {
    out = j.at(key).get<V>();
  } catch (const json::exception&) {
    throw ConfigError(path + "." + key + ": wrong type");
  }
}

}  // namespace

RunConfig parse_run_config(const std::string& text, const std::string& path) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(path + ": invalid JSON (" + e.what() + ")");
  }
  reject_unknown(j,
                 {"preset", "model", "schedule", "augment", "volumes", "resample_points", "freeze_backbone", "seed",
                  "dataset_dir", "output_dir", "checkpoint"},
                 path);
  RunConfig rc;

  std::string preset = "voxel";
  get(j, "preset", preset, path);
  if (preset == "voxel") {
    rc.model = FcpnConfig::voxel_preset();
    rc.augment = AugmentParams::voxel_defaults();
  } else if (preset == "part") {
    rc.model = FcpnConfig::part_preset();
    rc.augment = AugmentParams::part_defaults();
  } else if (preset == "caption") {
    rc.model = FcpnConfig::caption_preset();
    rc.augment = AugmentParams{};
  } else {
    throw ConfigError(path + ".preset: expected voxel, part or caption");
  }
  if (j.contains("model")) {
    if (!j["model"].is_object()) throw ConfigError(path + ".model: expected an object");
    json merged = json::parse(config_to_json(rc.model));
    for (auto it = j["model"].begin(); it != j["model"].end(); ++it) merged[it.key()] = it.value();
    rc.model = config_from_json(merged.dump(), path + ".model");
  }

  if (j.contains("schedule")) {
    const auto& s = j["schedule"];
    const auto p = path + ".schedule";
    reject_unknown(s, {"epochs", "initial_lr", "decay", "batch_size"}, p);
    get(s, "epochs", rc.schedule.epochs, p);
    get(s, "initial_lr", rc.schedule.initial_lr, p);
    get(s, "decay", rc.schedule.decay, p);
    get(s, "batch_size", rc.schedule.batch_size, p);
  }
  if (j.contains("augment")) {
    const auto& a = j["augment"];
    const auto p = path + ".augment";
    reject_unknown(a, {"rotate", "up_axis", "jitter", "dropout_lo", "dropout_hi", "shift", "scale"}, p);
    get(a, "rotate", rc.augment.rotate, p);
    get(a, "up_axis", rc.augment.up_axis, p);
    get(a, "jitter", rc.augment.jitter, p);
    get(a, "dropout_lo", rc.augment.dropout_lo, p);
    get(a, "dropout_hi", rc.augment.dropout_hi, p);
    get(a, "shift", rc.augment.shift, p);
    get(a, "scale", rc.augment.scale, p);
  }
  if (j.contains("volumes")) {
    const auto& v = j["volumes"];
    const auto p = path + ".volumes";
    reject_unknown(v, {"volume", "stride", "min_occupancy", "min_valid_fraction", "occupancy_cell", "label_cell",
                       "invalid_label"},
                   p);
    get(v, "volume", rc.volumes.volume, p);
    get(v, "stride", rc.volumes.stride, p);
    get(v, "min_occupancy", rc.volumes.min_occupancy, p);
    get(v, "min_valid_fraction", rc.volumes.min_valid_fraction, p);
    get(v, "occupancy_cell", rc.volumes.occupancy_cell, p);
    get(v, "label_cell", rc.volumes.label_cell, p);
    get(v, "invalid_label", rc.volumes.invalid_label, p);
  }
  get(j, "resample_points", rc.resample_points, path);
  get(j, "freeze_backbone", rc.freeze_backbone, path);
  get(j, "seed", rc.seed, path);
  get(j, "dataset_dir", rc.dataset_dir, path);
  get(j, "output_dir", rc.output_dir, path);
  get(j, "checkpoint", rc.checkpoint, path);

  try {
    rc.schedule.validate();
  } catch (const ConfigError& e) {
    throw ConfigError(path + "." + e.what());
  }
  try {
    rc.augment.validate();
  } catch (const ConfigError& e) {
    throw ConfigError(path + "." + e.what());
  }
  rc.schedule.seed = rc.seed;
  return rc;
}

RunConfig load_run_config(const std::string& file) {
  std::ifstream in(file);
  if (!in) throw InputError("cannot open config " + file);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_run_config(ss.str(), file);
}

std::string run_config_to_json(const RunConfig& rc) {
  json j;
  j["model"] = json::parse(config_to_json(rc.model));
  j["schedule"] = {{"epochs", rc.schedule.epochs},
                   {"initial_lr", rc.schedule.initial_lr},
                   {"decay", rc.schedule.decay},
                   {"batch_size", rc.schedule.batch_size}};
  j["augment"] = {{"rotate", rc.augment.rotate},         {"up_axis", rc.augment.up_axis},
                  {"jitter", rc.augment.jitter},         {"dropout_lo", rc.augment.dropout_lo},
                  {"dropout_hi", rc.augment.dropout_hi}, {"shift", rc.augment.shift},
                  {"scale", rc.augment.scale}};
  j["volumes"] = {{"volume", rc.volumes.volume},
                  {"stride", rc.volumes.stride},
                  {"min_occupancy", rc.volumes.min_occupancy},
                  {"min_valid_fraction", rc.volumes.min_valid_fraction},
                  {"occupancy_cell", rc.volumes.occupancy_cell},
                  {"label_cell", rc.volumes.label_cell},
                  {"invalid_label", rc.volumes.invalid_label}};
  j["resample_points"] = rc.resample_points;
  j["freeze_backbone"] = rc.freeze_backbone;
  j["seed"] = rc.seed;
  if (!rc.dataset_dir.empty()) j["dataset_dir"] = rc.dataset_dir;
  if (!rc.output_dir.empty()) j["output_dir"] = rc.output_dir;
  if (!rc.checkpoint.empty()) j["checkpoint"] = rc.checkpoint;
  return j.dump(2);
}

}  // namespace fcpn::cli
