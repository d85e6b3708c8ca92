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

#include "fcpn/cloud_io.hpp"

#include <bit>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <string_view>

#include "binary_io.hpp"
#include "fcpn/error.hpp"

namespace fcpn {
namespace {

std::vector<std::string_view> split_ws(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
    std::size_t j = i;
    while (j < line.size() && line[j] != ' ' && line[j] != '\t' && line[j] != '\r') ++j;
    if (j > i) out.push_back(line.substr(i, j - i));
    i = j;
  }
  return out;
}

double parse_double(std::string_view tok, std::size_t line) {
  double v = 0;
  auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (ec != std::errc() || ptr != tok.data() + tok.size()) {
    throw ParseError("line " + std::to_string(line) + ": '" + std::string(tok) + "' is not a number", line);
  }
  if (!std::isfinite(v)) throw ParseError("line " + std::to_string(line) + ": non-finite coordinate", line);
  return v;
}

std::int64_t parse_int(std::string_view tok, std::size_t line) {
  std::int64_t v = 0;
  auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (ec != std::errc() || ptr != tok.data() + tok.size()) {
    throw ParseError("line " + std::to_string(line) + ": '" + std::string(tok) + "' is not an integer", line);
  }
  return v;
}

void check_label(std::int64_t label, std::size_t line, const CloudLoadOptions& options) {
  const std::int64_t hi = options.class_count ? *options.class_count : std::int64_t{INT32_MAX};
  if (label < 0 || label >= hi) {
    throw ParseError("line " + std::to_string(line) + ": label " + std::to_string(label) + " outside [0," +
                         std::to_string(hi) + ")",
                     line);
  }
}

PointCloud parse_text(std::span<const std::uint8_t> bytes, bool with_labels, const CloudLoadOptions& options) {
  PointCloud cloud;
  std::string_view text(reinterpret_cast<const char*>(bytes.data()), bytes.size());
  std::size_t line_no = 0;
  std::size_t pos = 0;
  const std::size_t want = with_labels ? 4 : 3;
  while (pos < text.size()) {
    std::size_t nl = text.find('\n', pos);
    if (nl == std::string_view::npos) nl = text.size();
    std::string_view line = text.substr(pos, nl - pos);
    pos = nl + 1;
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    auto tok = split_ws(line);
    if (tok.empty()) continue;
    if (tok.size() != want) {
      throw ParseError("line " + std::to_string(line_no) + ": expected " + std::to_string(want) + " fields, got " +
                           std::to_string(tok.size()),
                       line_no);
    }
    cloud.points.push_back({parse_double(tok[0], line_no), parse_double(tok[1], line_no), parse_double(tok[2], line_no)});
    if (with_labels) {
      const auto label = parse_int(tok[3], line_no);
      check_label(label, line_no, options);
      cloud.labels.push_back(static_cast<std::int32_t>(label));
    }
  }
  return cloud;
}

enum class PlyType { i8, u8, i16, u16, i32, u32, f32, f64 };

std::optional<PlyType> ply_type(std::string_view s) {
  if (s == "char" || s == "int8") return PlyType::i8;
  if (s == "uchar" || s == "uint8") return PlyType::u8;
  if (s == "short" || s == "int16") return PlyType::i16;
  if (s == "ushort" || s == "uint16") return PlyType::u16;
  if (s == "int" || s == "int32") return PlyType::i32;
  if (s == "uint" || s == "uint32") return PlyType::u32;
  if (s == "float" || s == "float32") return PlyType::f32;
  if (s == "double" || s == "float64") return PlyType::f64;
  return std::nullopt;
}

std::size_t ply_size(PlyType t) {
  switch (t) {
    case PlyType::i8:
    case PlyType::u8: return 1;
    case PlyType::i16:
    case PlyType::u16: return 2;
    case PlyType::i32:
    case PlyType::u32:
    case PlyType::f32: return 4;
    case PlyType::f64: return 8;
  }
  return 0;
}

bool ply_is_float(PlyType t) { return t == PlyType::f32 || t == PlyType::f64; }

struct PlyProperty {
  std::string name;
  PlyType type;
};

struct PlyHeader {
  bool binary = false;
  std::size_t vertex_count = 0;
  std::vector<PlyProperty> props;
  int x = -1, y = -1, z = -1, label = -1;
  std::size_t body_offset = 0;
  std::size_t header_lines = 0;
};

PlyHeader parse_ply_header(std::string_view text) {
  PlyHeader h;
  std::size_t pos = 0, line_no = 0;
  bool seen_vertex = false, in_vertex = false, seen_format = false;
  auto next_line = [&]() -> std::string_view {
    if (pos >= text.size()) throw ParseError("ply: header ends before end_header", line_no + 1);
    std::size_t nl = text.find('\n', pos);
    if (nl == std::string_view::npos) throw ParseError("ply: header ends before end_header", line_no + 1);
    std::string_view line = text.substr(pos, nl - pos);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    pos = nl + 1;
    ++line_no;
    return line;
  };
  if (next_line() != "ply") throw ParseError("ply: missing 'ply' magic line", 1);
  while (true) {
    std::string_view line = next_line();
    auto tok = split_ws(line);
    if (tok.empty()) continue;
    if (tok[0] == "end_header") break;
    if (tok[0] == "comment" || tok[0] == "obj_info") continue;
    if (tok[0] == "format") {
      if (tok.size() != 3) throw ParseError("ply: malformed format line", line_no);
      if (tok[1] == "ascii") {
        h.binary = false;
      } else if (tok[1] == "binary_little_endian") {
        h.binary = true;
      } else if (tok[1] == "binary_big_endian") {
        throw UnsupportedFormatError("ply: big-endian binary is not supported");
      } else {
        throw ParseError("ply: unknown format '" + std::string(tok[1]) + "'", line_no);
      }
      seen_format = true;
    } else if (tok[0] == "element") {
      if (tok.size() != 3) throw ParseError("ply: malformed element line", line_no);
      const auto count = parse_int(tok[2], line_no);
      if (count < 0) throw ParseError("ply: negative element count", line_no);
      if (tok[1] == "vertex") {
        if (seen_vertex) throw ParseError("ply: duplicate vertex element", line_no);
        seen_vertex = in_vertex = true;
        h.vertex_count = static_cast<std::size_t>(count);
      } else {
        in_vertex = false;
        if (count > 0) throw UnsupportedFormatError("ply: element '" + std::string(tok[1]) + "' is not supported");
      }
    } else if (tok[0] == "property") {
      if (tok.size() >= 2 && tok[1] == "list") throw UnsupportedFormatError("ply: list properties are not supported");
      if (tok.size() != 3) throw ParseError("ply: malformed property line", line_no);
      auto type = ply_type(tok[1]);
      if (!type) throw UnsupportedFormatError("ply: unknown property type '" + std::string(tok[1]) + "'");
      if (!in_vertex) continue;
      const int idx = static_cast<int>(h.props.size());
      h.props.push_back({std::string(tok[2]), *type});
      const auto& name = h.props.back().name;
      if (name == "x" || name == "y" || name == "z") {
        if (!ply_is_float(*type)) throw UnsupportedFormatError("ply: coordinate '" + name + "' must be float or double");
        (name == "x" ? h.x : name == "y" ? h.y : h.z) = idx;
      } else if (name == "label") {
        if (ply_is_float(*type)) throw UnsupportedFormatError("ply: label property must be an integer type");
        h.label = idx;
      }
    } else {
      throw ParseError("ply: unexpected header keyword '" + std::string(tok[0]) + "'", line_no);
    }
  }
  if (!seen_format) throw ParseError("ply: missing format line", line_no);
  if (!seen_vertex) throw ParseError("ply: missing vertex element", line_no);
  if (h.x < 0 || h.y < 0 || h.z < 0) throw ParseError("ply: vertex element lacks x/y/z", line_no);
  h.body_offset = pos;
  h.header_lines = line_no;
  return h;
}

double read_binary_value(const std::uint8_t* p, PlyType t) {
  auto le = [p](std::size_t n) {
    std::uint64_t v = 0;
    for (std::size_t i = 0; i < n; ++i) v |= static_cast<std::uint64_t>(p[i]) << (8 * i);
    return v;
  };
  switch (t) {
    case PlyType::i8: return static_cast<std::int8_t>(p[0]);
    case PlyType::u8: return p[0];
    case PlyType::i16: return static_cast<std::int16_t>(le(2));
    case PlyType::u16: return static_cast<std::uint16_t>(le(2));
    case PlyType::i32: return static_cast<std::int32_t>(le(4));
    case PlyType::u32: return static_cast<std::uint32_t>(le(4));
    case PlyType::f32: return std::bit_cast<float>(static_cast<std::uint32_t>(le(4)));
    case PlyType::f64: return std::bit_cast<double>(le(8));
  }
  return 0;
}

PointCloud parse_ply(std::span<const std::uint8_t> bytes, const CloudLoadOptions& options) {
  std::string_view text(reinterpret_cast<const char*>(bytes.data()), bytes.size());
  const PlyHeader h = parse_ply_header(text);
  PointCloud cloud;
  cloud.points.reserve(h.vertex_count);
  const bool lab = h.label >= 0;
  if (h.binary) {
    std::size_t stride = 0;
    std::vector<std::size_t> offs;
    for (const auto& p : h.props) {
      offs.push_back(stride);
      stride += ply_size(p.type);
    }
    const std::size_t need = h.vertex_count * stride;
    if (bytes.size() - h.body_offset < need) {
      throw ParseError("ply: binary body truncated (" + std::to_string(bytes.size() - h.body_offset) + " of " +
                           std::to_string(need) + " bytes)",
                       0, bytes.size());
    }
    for (std::size_t v = 0; v < h.vertex_count; ++v) {
      const std::uint8_t* row = bytes.data() + h.body_offset + v * stride;
      Vec3 pt{read_binary_value(row + offs[h.x], h.props[h.x].type), read_binary_value(row + offs[h.y], h.props[h.y].type),
              read_binary_value(row + offs[h.z], h.props[h.z].type)};
      for (double c : pt) {
        if (!std::isfinite(c)) {
          throw ParseError("ply: vertex " + std::to_string(v) + " has a non-finite coordinate", 0,
                           h.body_offset + v * stride);
        }
      }
      cloud.points.push_back(pt);
      if (lab) {
        const auto label = static_cast<std::int64_t>(read_binary_value(row + offs[h.label], h.props[h.label].type));
        check_label(label, 0, options);
        cloud.labels.push_back(static_cast<std::int32_t>(label));
      }
    }
  } else {
    std::size_t pos = h.body_offset;
    std::size_t line_no = h.header_lines;
    std::size_t v = 0;
    while (v < h.vertex_count) {
      if (pos >= text.size()) throw ParseError("ply: expected " + std::to_string(h.vertex_count) + " vertices, got " + std::to_string(v), line_no + 1);
      std::size_t nl = text.find('\n', pos);
      if (nl == std::string_view::npos) nl = text.size();
      std::string_view line = text.substr(pos, nl - pos);
      pos = nl + 1;
      ++line_no;
      auto tok = split_ws(line);
      if (tok.empty()) continue;
      if (tok.size() != h.props.size()) {
        throw ParseError("line " + std::to_string(line_no) + ": expected " + std::to_string(h.props.size()) +
                             " values, got " + std::to_string(tok.size()),
                         line_no);
      }
      for (std::size_t k = 0; k < tok.size(); ++k) {
        if (ply_is_float(h.props[k].type)) {
          parse_double(tok[k], line_no);
        } else {
          parse_int(tok[k], line_no);
        }
      }
      cloud.points.push_back({parse_double(tok[h.x], line_no), parse_double(tok[h.y], line_no), parse_double(tok[h.z], line_no)});
      if (lab) {
        const auto label = parse_int(tok[h.label], line_no);
        check_label(label, line_no, options);
        cloud.labels.push_back(static_cast<std::int32_t>(label));
      }
      ++v;
    }
  }
  return cloud;
}

void append(std::vector<std::uint8_t>& buf, const std::string& s) { buf.insert(buf.end(), s.begin(), s.end()); }

std::string fmt_double(double v) {
  char b[40];
  std::snprintf(b, sizeof(b), "%.17g", v);
  return b;
}

}  // namespace

CloudFormat format_from_path(const std::string& path) {
  auto ends = [&](std::string_view suf) {
    return path.size() >= suf.size() && path.compare(path.size() - suf.size(), suf.size(), suf) == 0;
  };
  if (ends(".ply")) return CloudFormat::ply_binary_le;
  if (ends(".xyzl")) return CloudFormat::xyzl_text;
  if (ends(".xyz")) return CloudFormat::xyz_text;
  throw UnsupportedFormatError("cannot infer point cloud format from '" + path + "'");
}

PointCloud parse_cloud(std::span<const std::uint8_t> bytes, CloudFormat format, const CloudLoadOptions& options) {
  switch (format) {
    case CloudFormat::xyz_text: return parse_text(bytes, false, options);
    case CloudFormat::xyzl_text: return parse_text(bytes, true, options);
    case CloudFormat::ply_ascii:
    case CloudFormat::ply_binary_le: return parse_ply(bytes, options);
  }
  throw UnsupportedFormatError("unknown cloud format");
}

PointCloud load_cloud(const std::string& path, std::optional<CloudFormat> format, const CloudLoadOptions& options) {
  const CloudFormat f = format ? *format : format_from_path(path);
  auto bytes = detail::read_file_bytes(path);
  return parse_cloud(bytes, f, options);
}

std::vector<std::uint8_t> serialize_cloud(const PointCloud& cloud, CloudFormat format) {
  cloud.validate();
  std::vector<std::uint8_t> buf;
  const bool lab = cloud.has_labels();
  if (format == CloudFormat::xyz_text || format == CloudFormat::xyzl_text) {
    const bool with_labels = format == CloudFormat::xyzl_text;
    if (with_labels && !lab && !cloud.empty()) throw InputError("xyzl output needs a labeled cloud");
    for (std::size_t i = 0; i < cloud.size(); ++i) {
      const auto& p = cloud.points[i];
      std::string line = fmt_double(p[0]) + " " + fmt_double(p[1]) + " " + fmt_double(p[2]);
      if (with_labels) line += " " + std::to_string(cloud.labels[i]);
      line += "\n";
      append(buf, line);
    }
    return buf;
  }
  const bool binary = format == CloudFormat::ply_binary_le;
  std::string header = "ply\nformat ";
  header += binary ? "binary_little_endian 1.0\n" : "ascii 1.0\n";
  header += "element vertex " + std::to_string(cloud.size()) + "\n";
  header += "property double x\nproperty double y\nproperty double z\n";
  if (lab) header += "property int label\n";
  header += "end_header\n";
  append(buf, header);
  if (binary) {
    detail::ByteWriter w;
    for (std::size_t i = 0; i < cloud.size(); ++i) {
      for (double c : cloud.points[i]) {
        const auto bits = std::bit_cast<std::uint64_t>(c);
        for (int k = 0; k < 8; ++k) w.u8(static_cast<std::uint8_t>(bits >> (8 * k)));
      }
      if (lab) w.u32(static_cast<std::uint32_t>(cloud.labels[i]));
    }
    buf.insert(buf.end(), w.buffer().begin(), w.buffer().end());
  } else {
    for (std::size_t i = 0; i < cloud.size(); ++i) {
      const auto& p = cloud.points[i];
      std::string line = fmt_double(p[0]) + " " + fmt_double(p[1]) + " " + fmt_double(p[2]);
      if (lab) line += " " + std::to_string(cloud.labels[i]);
      line += "\n";
      append(buf, line);
    }
  }
  return buf;
}

void save_cloud(const std::string& path, const PointCloud& cloud, std::optional<CloudFormat> format) {
  const CloudFormat f = format ? *format : format_from_path(path);
  detail::write_file_bytes(path, serialize_cloud(cloud, f));
}

}  // namespace fcpn
