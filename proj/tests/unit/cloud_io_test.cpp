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

#include <doctest.h>

#include <cmath>
#include <cstring>
#include <string>

#include "fcpn/augment.hpp"
#include "fcpn/cloud_io.hpp"
#include "fcpn/error.hpp"

using namespace fcpn;

namespace {

std::vector<std::uint8_t> bytes_of(const std::string& s) { return {s.begin(), s.end()}; }

PointCloud sample_cloud() {
  PointCloud c;
  c.points = {{0.1, 0.2, 0.3}, {-1.25, 4.0, 1e-3}, {3.0, 3.0, 3.0}};
  c.labels = {1, 0, 7};
  return c;
}

}  // namespace

TEST_CASE("xyz and xyzl text parse with comments") {
  auto c = parse_cloud(bytes_of("# header\n1 2 3\n\n4 5 6 # trailing\n"), CloudFormat::xyz_text);
  REQUIRE(c.size() == 2);
  CHECK(c.points[1][2] == 6.0);
  CHECK_FALSE(c.has_labels());
  auto l = parse_cloud(bytes_of("1 2 3 4\n5 6 7 8\n"), CloudFormat::xyzl_text);
  CHECK(l.labels == std::vector<std::int32_t>{4, 8});
}

TEST_CASE("text parse errors carry the line number") {
  try {
    parse_cloud(bytes_of("1 2 3\n4 x 6\n"), CloudFormat::xyz_text);
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.line() == 2);
  }
  CHECK_THROWS_AS(parse_cloud(bytes_of("1 2\n"), CloudFormat::xyz_text), ParseError);
  CHECK_THROWS_AS(parse_cloud(bytes_of("1 2 nan\n"), CloudFormat::xyz_text), ParseError);
  CHECK_THROWS_AS(parse_cloud(bytes_of("1 2 3 1.5\n"), CloudFormat::xyzl_text), ParseError);
  CloudLoadOptions o;
  o.class_count = 5;
  CHECK_THROWS_AS(parse_cloud(bytes_of("1 2 3 5\n"), CloudFormat::xyzl_text, o), ParseError);
}

TEST_CASE("every format round-trips bit exactly") {
  const auto c = sample_cloud();
  for (auto f : {CloudFormat::xyzl_text, CloudFormat::ply_ascii, CloudFormat::ply_binary_le}) {
    const auto bytes = serialize_cloud(c, f);
    const auto back = parse_cloud(bytes, f);
    CHECK(back.points == c.points);
    CHECK(back.labels == c.labels);
    CHECK(serialize_cloud(back, f) == bytes);
  }
  const auto xyz = parse_cloud(serialize_cloud(c, CloudFormat::xyz_text), CloudFormat::xyz_text);
  CHECK(xyz.points == c.points);
}

TEST_CASE("ply header features outside the subset are rejected") {
  const std::string head = "ply\nformat ascii 1.0\nelement vertex 1\nproperty float x\nproperty float y\nproperty float z\n";
  CHECK(parse_cloud(bytes_of(head + "end_header\n1 2 3\n"), CloudFormat::ply_ascii).size() == 1);
  CHECK_THROWS_AS(parse_cloud(bytes_of("ply\nformat binary_big_endian 1.0\nelement vertex 0\nend_header\n"),
                              CloudFormat::ply_ascii),
                  UnsupportedFormatError);
  CHECK_THROWS_AS(parse_cloud(bytes_of(head + "element face 1\nproperty list uchar int vertex_indices\nend_header\n1 2 3\n3 0 0 0\n"),
                              CloudFormat::ply_ascii),
                  UnsupportedFormatError);
  CHECK_THROWS_AS(parse_cloud(bytes_of(head + "property float label\nend_header\n1 2 3 4\n"), CloudFormat::ply_ascii),
                  UnsupportedFormatError);
  CHECK_THROWS_AS(parse_cloud(bytes_of("plx\n"), CloudFormat::ply_ascii), ParseError);
  CHECK_THROWS_AS(parse_cloud(bytes_of(head), CloudFormat::ply_ascii), ParseError);
  CHECK_THROWS_AS(parse_cloud(bytes_of(head + "end_header\n1 2\n"), CloudFormat::ply_ascii), ParseError);
}

TEST_CASE("truncated binary ply reports the byte offset") {
  const auto bytes = serialize_cloud(sample_cloud(), CloudFormat::ply_binary_le);
  std::vector<std::uint8_t> cut(bytes.begin(), bytes.end() - 5);
  try {
    parse_cloud(cut, CloudFormat::ply_binary_le);
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.offset() > 0);
  }
}

TEST_CASE("format follows the extension") {
  CHECK(format_from_path("a/b.xyzl") == CloudFormat::xyzl_text);
  CHECK(format_from_path("a.xyz") == CloudFormat::xyz_text);
  CHECK_THROWS_AS(format_from_path("a.obj"), UnsupportedFormatError);
}

TEST_CASE("resample returns exactly n points and keeps labels attached") {
  PointCloud c;
  for (int i = 0; i < 10; ++i) {
    c.points.push_back({double(i), 0, 0});
    c.labels.push_back(i);
  }
  Rng rng(1);
  auto down = resample(c, 4, rng);
  CHECK(down.size() == 4);
  auto up = resample(c, 25, rng);
  CHECK(up.size() == 25);
  std::vector<int> seen(10, 0);
  for (std::size_t i = 0; i < up.size(); ++i) {
    CHECK(up.labels[i] == static_cast<int>(up.points[i][0]));
    ++seen[static_cast<std::size_t>(up.labels[i])];
  }
  for (int s : seen) CHECK(s >= 1);
}

TEST_CASE("rotation about the up axis preserves pairwise distances and heights") {
  PointCloud c;
  c.points = {{0, 0, 0}, {1, 2, 3}, {-1, 0.5, 2}};
  AugmentParams p;
  p.rotate = true;
  p.forced_angle = 0.7;
  Rng rng(2);
  auto r = augment(c, p, rng);
  auto dist = [](const Vec3& a, const Vec3& b) {
    return std::sqrt((a[0] - b[0]) * (a[0] - b[0]) + (a[1] - b[1]) * (a[1] - b[1]) + (a[2] - b[2]) * (a[2] - b[2]));
  };
  CHECK(dist(r.points[0], r.points[1]) == doctest::Approx(dist(c.points[0], c.points[1])));
  CHECK(dist(r.points[1], r.points[2]) == doctest::Approx(dist(c.points[1], c.points[2])));
  CHECK(r.points[1][2] == c.points[1][2]);
}

TEST_CASE("augmentation parameters are validated") {
  AugmentParams p;
  p.dropout_lo = 0.5;
  p.dropout_hi = 0.2;
  CHECK_THROWS_AS(p.validate(), ConfigError);
  AugmentParams q;
  q.scale = 1.5;
  CHECK_THROWS_AS(q.validate(), ConfigError);
}

TEST_CASE("dropout never returns an empty cloud") {
  PointCloud c;
  c.points = {{0, 0, 0}, {1, 1, 1}};
  AugmentParams p;
  p.dropout_lo = p.dropout_hi = 0.95;
  Rng rng(3);
  int ok = 0, failed = 0;
  for (int i = 0; i < 200; ++i) {
    try {
      const auto out = augment(c, p, rng);
      REQUIRE(out.size() >= 1);
      ++ok;
    } catch (const InputError&) {
      ++failed;
    }
  }
  // Both outcomes occur at this rate: 0.9025^10 ~ 0.36 per call.
  CHECK(ok > 0);
  CHECK(failed > 0);
}

TEST_CASE("unit sphere normalisation and its inverse") {
  PointCloud c;
  c.points = {{1, 1, 1}, {3, 1, 1}, {2, 4, 1}};
  auto [n, t] = normalize_unit_sphere(c);
  double far = 0.0;
  for (const auto& p : n.points) far = std::max(far, std::sqrt(p[0] * p[0] + p[1] * p[1] + p[2] * p[2]));
  CHECK(far == doctest::Approx(1.0));
  const auto back = t.invert(n.points[2]);
  CHECK(back[1] == doctest::Approx(4.0));
}
