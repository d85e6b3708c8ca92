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

#include "fcpn/config.hpp"

#include <cmath>
#include <set>

#include "fcpn/error.hpp"
#include "json.hpp"

namespace fcpn {

using nlohmann::json;

const char* to_string(HeadType head) {
  switch (head) {
    case HeadType::voxel: return "voxel";
    case HeadType::point: return "point";
    case HeadType::caption: return "caption";
  }
  return "?";
}

const char* to_string(PoolMode mode) { return mode == PoolMode::weighted ? "weighted" : "zero"; }

namespace {

bool near(double a, double b) { return std::abs(a - b) <= 1e-9 * std::max(1.0, std::abs(b)); }

bool is_multiple(double value, double unit) {
  const double r = value / unit;
  return std::round(r) >= 1.0 && std::abs(r - std::round(r)) <= 1e-6;
}

}  // namespace

std::size_t FcpnConfig::upsample_factor() const {
  const double r = s1 / output_cell;
  if (!(output_cell > 0.0) || std::round(r) < 1.0 || std::abs(r - std::round(r)) > 1e-6) {
    throw ConfigError("output_cell: S1 / output_cell = " + std::to_string(r) + " is not an integer");
  }
  return static_cast<std::size_t>(std::round(r));
}

void FcpnConfig::validate() const {
  if (!(s1 > 0.0)) throw ConfigError("s1: must be positive");
  if (!near(s2, 2.0 * s1)) throw ConfigError("s2: must equal 2*s1");
  if (!near(s3, 2.0 * s2)) throw ConfigError("s3: must equal 2*s2");
  for (int a = 0; a < 3; ++a) {
    if (!is_multiple(extent[a], s3)) {
      throw ConfigError("extent[" + std::to_string(a) + "]: " + std::to_string(extent[a]) + " is not a multiple of s3");
    }
  }
  if (pointnet_widths.empty()) throw ConfigError("pointnet_widths: needs at least one layer");
  for (auto w : pointnet_widths)
    if (w == 0) throw ConfigError("pointnet_widths: widths must be positive");
  if (!stage2_width || !stage3_width || !skip_width || !merge_width) throw ConfigError("stage widths must be positive");
  if (class_count < 2) throw ConfigError("class_count: needs at least two classes");
  if (!(dropout >= 0.0 && dropout < 1.0)) throw ConfigError("dropout: must be in [0,1)");
  if (!(pool_radius > 0.0)) throw ConfigError("pool_radius: must be positive");
  if (group_radius < 0.0) throw ConfigError("group_radius: must be non-negative");
  if (p_max == 0) throw ConfigError("p_max: must be positive");
  switch (head) {
    case HeadType::voxel: {
      if (class_count > 256) throw ConfigError("class_count: voxel labels are stored as u8");
      const auto f = upsample_factor();
      if (f != 1 && f != 2 && f != 3) throw ConfigError("output_cell: S1 / output_cell must be 1, 2 or 3");
      if (!head_width) throw ConfigError("head_width: must be positive");
      break;
    }
    case HeadType::point:
      if (point_head_widths.size() != 2) throw ConfigError("point_head_widths: expects two hidden widths");
      if (!object_classes) throw ConfigError("object_classes: must be positive");
      break;
    case HeadType::caption:
      if (caption_widths.size() != 2) throw ConfigError("caption_widths: expects two hidden widths");
      if (!caption_count) throw ConfigError("caption_count: must be positive");
      break;
  }
}

FcpnConfig FcpnConfig::voxel_preset() { return FcpnConfig{}; }

FcpnConfig FcpnConfig::part_preset() {
  FcpnConfig c;
  c.s1 = 0.10;
  c.s2 = 0.20;
  c.s3 = 0.40;
  c.extent = {2.8, 2.8, 2.8};
  c.head = HeadType::point;
  c.class_count = 50;
  return c;
}

FcpnConfig FcpnConfig::caption_preset() {
  FcpnConfig c;
  c.head = HeadType::caption;
  return c;
}

std::string config_to_json(const FcpnConfig& c, int indent) {
  json j;
  j["s1"] = c.s1;
  j["s2"] = c.s2;
  j["s3"] = c.s3;
  j["extent"] = c.extent;
  j["pointnet_widths"] = c.pointnet_widths;
  j["stage2_width"] = c.stage2_width;
  j["stage3_width"] = c.stage3_width;
  j["skip_width"] = c.skip_width;
  j["merge_width"] = c.merge_width;
  j["head"] = to_string(c.head);
  j["class_count"] = c.class_count;
  j["output_cell"] = c.output_cell;
  j["head_width"] = c.head_width;
  j["point_head_widths"] = c.point_head_widths;
  j["object_classes"] = c.object_classes;
  j["caption_widths"] = c.caption_widths;
  j["caption_count"] = c.caption_count;
  j["pool_radius"] = c.pool_radius;
  j["pool_mode"] = to_string(c.pool_mode);
  j["dropout"] = c.dropout;
  j["group_radius"] = c.group_radius;
  j["p_max"] = c.p_max;
  return j.dump(indent);
}

FcpnConfig config_from_json(const std::string& text, const std::string& path) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(path + ": invalid JSON (" + e.what() + ")");
  }
  if (!j.is_object()) throw ConfigError(path + ": expected an object");
  static const std::set<std::string> known{
      "s1", "s2", "s3", "extent", "pointnet_widths", "stage2_width", "stage3_width", "skip_width",
      "merge_width", "head", "class_count", "output_cell", "head_width", "point_head_widths", "object_classes",
      "caption_widths", "caption_count", "pool_radius", "pool_mode", "dropout", "group_radius", "p_max"};
  for (auto it = j.begin(); it != j.end(); ++it) {
    if (!known.count(it.key())) throw ConfigError(path + "." + it.key() + ": unknown key");
  }
  FcpnConfig c;
  auto get = [&](const char* key, auto& field) {
    if (!j.contains(key)) return;
    try {
      field = j.at(key).get<std::decay_t<decltype(field)>>();
    } catch (const json::exception&) {
      throw ConfigError(path + "." + key + ": wrong type");
    }
  };
  get("s1", c.s1);
  get("s2", c.s2);
  get("s3", c.s3);
  get("extent", c.extent);
  get("pointnet_widths", c.pointnet_widths);
  get("stage2_width", c.stage2_width);
  get("stage3_width", c.stage3_width);
  get("skip_width", c.skip_width);
  get("merge_width", c.merge_width);
  get("class_count", c.class_count);
  get("output_cell", c.output_cell);
  get("head_width", c.head_width);
  get("point_head_widths", c.point_head_widths);
  get("object_classes", c.object_classes);
  get("caption_widths", c.caption_widths);
  get("caption_count", c.caption_count);
  get("pool_radius", c.pool_radius);
  get("dropout", c.dropout);
  get("group_radius", c.group_radius);
  get("p_max", c.p_max);
  if (j.contains("head")) {
    std::string h;
    get("head", h);
    if (h == "voxel") {
      c.head = HeadType::voxel;
    } else if (h == "point") {
      c.head = HeadType::point;
    } else if (h == "caption") {
      c.head = HeadType::caption;
    } else {
      throw ConfigError(path + ".head: expected voxel, point or caption");
    }
  }
  if (j.contains("pool_mode")) {
    std::string m;
    get("pool_mode", m);
    if (m == "weighted") {
      c.pool_mode = PoolMode::weighted;
    } else if (m == "zero") {
      c.pool_mode = PoolMode::zero;
    } else {
      throw ConfigError(path + ".pool_mode: expected weighted or zero");
    }
  }
  try {
    c.validate();
  } catch (const ConfigError& e) {
    throw ConfigError(path + "." + e.what());
  }
  return c;
}

}  // namespace fcpn
