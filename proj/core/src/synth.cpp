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

#include "fcpn/synth.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <set>
#include <tuple>

#include "fcpn/error.hpp"

namespace fcpn {

namespace {

using Rng = std::mt19937_64;

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

double uniform(Rng& rng, double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); }

struct Box {
  Vec3 lo;
  Vec3 hi;
};

class SceneBuilder {
 public:
  SceneBuilder(const SynthSceneOptions& o, Rng& rng) : o_(o), rng_(rng) {}

  // Grid samples of the rectangle spanned by axes (a, b) at fixed c = value.
  void plane(int a, int b, double a0, double a1, double b0, double b1, int c, double value, std::int32_t label,
             const std::vector<Box>& holes = {}) {
    const double s = o_.spacing;
    for (double u = a0 + s / 2; u < a1; u += s) {
      for (double v = b0 + s / 2; v < b1; v += s) {
        Vec3 p{};
        p[a] = u;
        p[b] = v;
        p[c] = value;
        bool hidden = false;
        for (const auto& h : holes) {
          if (p[a] >= h.lo[a] && p[a] <= h.hi[a] && p[b] >= h.lo[b] && p[b] <= h.hi[b]) hidden = true;
        }
        if (!hidden) add(p, label);
      }
    }
  }

  // Top and four sides of an axis-aligned box.
  void box(const Box& b, std::int32_t label, const std::vector<Box>& holes = {}) {
    plane(0, 1, b.lo[0], b.hi[0], b.lo[1], b.hi[1], 2, b.hi[2], label, holes);
    plane(1, 2, b.lo[1], b.hi[1], b.lo[2], b.hi[2], 0, b.lo[0], label);
    plane(1, 2, b.lo[1], b.hi[1], b.lo[2], b.hi[2], 0, b.hi[0], label);
    plane(0, 2, b.lo[0], b.hi[0], b.lo[2], b.hi[2], 1, b.lo[1], label);
    plane(0, 2, b.lo[0], b.hi[0], b.lo[2], b.hi[2], 1, b.hi[1], label);
  }

  // Fibonacci lattice over the sphere at roughly the sampling spacing.
  void sphere(const Vec3& c, double r, std::int32_t label) {
    const double area = 4.0 * std::numbers::pi * r * r;
    const auto n = static_cast<std::size_t>(std::max(16.0, area / (o_.spacing * o_.spacing)));
    const double golden = std::numbers::pi * (3.0 - std::sqrt(5.0));
    for (std::size_t i = 0; i < n; ++i) {
      const double z = 1.0 - 2.0 * (static_cast<double>(i) + 0.5) / static_cast<double>(n);
      const double rho = std::sqrt(std::max(0.0, 1.0 - z * z));
      const double phi = golden * static_cast<double>(i);
      add({c[0] + r * rho * std::cos(phi), c[1] + r * rho * std::sin(phi), c[2] + r * z}, label);
    }
  }

  PointCloud finish() {
    if (!o_.snap) return std::move(cloud_);
    std::set<std::tuple<long, long, long, std::int32_t>> seen;
    PointCloud out;
    const double cs = o_.snap_cell;
    for (std::size_t i = 0; i < cloud_.size(); ++i) {
      const auto& p = cloud_.points[i];
      const long x = static_cast<long>(std::floor(p[0] / cs));
      const long y = static_cast<long>(std::floor(p[1] / cs));
      const long z = static_cast<long>(std::floor(p[2] / cs));
      if (!seen.emplace(x, y, z, cloud_.labels[i]).second) continue;
      out.points.push_back({(static_cast<double>(x) + 0.5) * cs, (static_cast<double>(y) + 0.5) * cs,
                            (static_cast<double>(z) + 0.5) * cs});
      out.labels.push_back(cloud_.labels[i]);
    }
    return out;
  }

 private:
  void add(Vec3 p, std::int32_t label) {
    if (o_.jitter > 0.0) {
      for (auto& x : p) x += uniform(rng_, -o_.jitter, o_.jitter);
    }
    for (int a = 0; a < 3; ++a) p[a] = std::clamp(p[a], 0.0, o_.extent[a]);
    cloud_.points.push_back(p);
    cloud_.labels.push_back(label);
  }

  const SynthSceneOptions& o_;
  Rng& rng_;
  PointCloud cloud_;
};

bool overlaps(const Box& a, const Box& b, double margin) {
  for (int k = 0; k < 2; ++k) {
    if (a.hi[k] + margin <= b.lo[k] || b.hi[k] + margin <= a.lo[k]) return false;
  }
  return true;
}

PointCloud make_scene(Rng& rng, const SynthSceneOptions& o) {
  const double W = o.extent[0];
  const double D = o.extent[1];
  const double H = o.extent[2];
  const double e = o.spacing / 2;
  SceneBuilder sb(o, rng);

  std::vector<Box> footprints;
  std::vector<Box> tables;
  const auto n_tables = std::uniform_int_distribution<std::size_t>(1, std::max<std::size_t>(1, o.max_tables))(rng);
  for (std::size_t t = 0, tries = 0; t < n_tables && tries < 50; ++tries) {
    const double sx = uniform(rng, 0.4, 0.9);
    const double sy = uniform(rng, 0.4, 0.9);
    const double x = uniform(rng, 0.2, W - 0.2 - sx);
    const double y = uniform(rng, 0.2, D - 0.2 - sy);
    Box b{{x, y, 0.0}, {x + sx, y + sy, uniform(rng, 0.5, 0.8)}};
    if (std::any_of(footprints.begin(), footprints.end(), [&](const Box& f) { return overlaps(f, b, 0.1); })) continue;
    footprints.push_back(b);
    tables.push_back(b);
    ++t;
  }

  std::vector<std::pair<Vec3, double>> chairs;
  const auto n_chairs = std::uniform_int_distribution<std::size_t>(0, o.max_chairs)(rng);
  for (std::size_t c = 0, tries = 0; c < n_chairs && tries < 50; ++tries) {
    const double r = uniform(rng, 0.2, 0.35);
    const Vec3 ctr{uniform(rng, 0.2 + r, W - 0.2 - r), uniform(rng, 0.2 + r, D - 0.2 - r), r};
    Box b{{ctr[0] - r, ctr[1] - r, 0.0}, {ctr[0] + r, ctr[1] + r, 2 * r}};
    if (std::any_of(footprints.begin(), footprints.end(), [&](const Box& f) { return overlaps(f, b, 0.1); })) continue;
    footprints.push_back(b);
    chairs.emplace_back(ctr, r);
    ++c;
  }

  sb.plane(0, 1, 0.0, W, 0.0, D, 2, e, synth_class::floor);
  const double wall_top = std::min(2.2, H - 0.05);
  sb.plane(1, 2, 0.0, D, o.spacing, uniform(rng, 1.2, wall_top), 0, e, synth_class::wall);
  sb.plane(1, 2, 0.0, D, o.spacing, uniform(rng, 1.2, wall_top), 0, W - e, synth_class::wall);
  sb.plane(0, 2, o.spacing, W - o.spacing, o.spacing, uniform(rng, 1.2, wall_top), 1, e, synth_class::wall);
  sb.plane(0, 2, o.spacing, W - o.spacing, o.spacing, uniform(rng, 1.2, wall_top), 1, D - e, synth_class::wall);

  for (const auto& t : tables) {
    std::vector<Box> items;
    const int n_items = std::uniform_int_distribution<int>(0, 2)(rng);
    for (int i = 0, tries = 0; i < n_items && tries < 20; ++tries) {
      const double sx = uniform(rng, 0.1, 0.25);
      const double sy = uniform(rng, 0.1, 0.25);
      if (sx > t.hi[0] - t.lo[0] || sy > t.hi[1] - t.lo[1]) continue;
      const double x = uniform(rng, t.lo[0], t.hi[0] - sx);
      const double y = uniform(rng, t.lo[1], t.hi[1] - sy);
      Box b{{x, y, t.hi[2]}, {x + sx, y + sy, t.hi[2] + uniform(rng, 0.08, 0.2)}};
      if (std::any_of(items.begin(), items.end(), [&](const Box& f) { return overlaps(f, b, 0.05); })) continue;
      items.push_back(b);
      ++i;
    }
    sb.box(t, synth_class::table, items);
    for (const auto& b : items) sb.box(b, synth_class::other);
  }
  for (const auto& [c, r] : chairs) sb.sphere(c, r, synth_class::chair);
  return sb.finish();
}

// Random point on the side of a vertical cylinder or one of its caps,
// area weighted.
Vec3 cylinder_point(Rng& rng, double r, double z0, double z1) {
  const double side = 2 * std::numbers::pi * r * (z1 - z0);
  const double cap = std::numbers::pi * r * r;
  const double u = uniform(rng, 0.0, side + 2 * cap);
  const double phi = uniform(rng, 0.0, 2 * std::numbers::pi);
  if (u < side) return {r * std::cos(phi), r * std::sin(phi), uniform(rng, z0, z1)};
  const double rho = r * std::sqrt(uniform(rng, 0.0, 1.0));
  return {rho * std::cos(phi), rho * std::sin(phi), u < side + cap ? z0 : z1};
}

Vec3 sphere_point(Rng& rng, double r, double zc) {
  const double z = uniform(rng, -1.0, 1.0);
  const double phi = uniform(rng, 0.0, 2 * std::numbers::pi);
  const double rho = std::sqrt(1.0 - z * z);
  return {r * rho * std::cos(phi), r * rho * std::sin(phi), zc + r * z};
}

Vec3 box_point(Rng& rng, double hx, double hy, double z0, double z1) {
  const double ax = 4 * hx * hy;
  const double sx = 2 * hy * (z1 - z0);
  const double sy = 2 * hx * (z1 - z0);
  const double u = uniform(rng, 0.0, 2 * (ax + sx + sy));
  const double x = uniform(rng, -hx, hx);
  const double y = uniform(rng, -hy, hy);
  const double z = uniform(rng, z0, z1);
  if (u < 2 * ax) return {x, y, u < ax ? z0 : z1};
  if (u < 2 * ax + 2 * sx) return {u < 2 * ax + sx ? -hx : hx, y, z};
  return {x, u < 2 * ax + 2 * sx + sy ? -hy : hy, z};
}

PointCloud make_part_shape(Rng& rng, std::int32_t category, std::size_t n) {
  PointCloud s;
  s.object_class = category;
  const double post_r = uniform(rng, 0.08, 0.16);
  const double post_h = uniform(rng, 0.8, 1.4);
  if (category == 0) {
    const double ball_r = uniform(rng, 0.25, 0.4);
    const double post_area = 2 * std::numbers::pi * post_r * post_h;
    const double ball_area = 4 * std::numbers::pi * ball_r * ball_r;
    for (std::size_t i = 0; i < n; ++i) {
      if (uniform(rng, 0.0, post_area + ball_area) < post_area) {
        const double phi = uniform(rng, 0.0, 2 * std::numbers::pi);
        s.points.push_back({post_r * std::cos(phi), post_r * std::sin(phi), uniform(rng, 0.0, post_h)});
        s.labels.push_back(0);
      } else {
        s.points.push_back(sphere_point(rng, ball_r, post_h + ball_r));
        s.labels.push_back(1);
      }
    }
  } else {
    const double hx = uniform(rng, 0.35, 0.6);
    const double hy = uniform(rng, 0.35, 0.6);
    const double thick = uniform(rng, 0.06, 0.12);
    const double post_area = 2 * std::numbers::pi * post_r * post_h;
    const double slab_area = 8 * hx * hy + 4 * (hx + hy) * thick;
    for (std::size_t i = 0; i < n; ++i) {
      if (uniform(rng, 0.0, post_area + slab_area) < post_area) {
        s.points.push_back(cylinder_point(rng, post_r, 0.0, post_h));
        s.labels.push_back(2);
      } else {
        s.points.push_back(box_point(rng, hx, hy, post_h, post_h + thick));
        s.labels.push_back(3);
      }
    }
  }
  return s;
}

}  // namespace

std::vector<PointCloud> synth_scenes(std::uint64_t seed, std::size_t count, const SynthSceneOptions& options) {
  for (int a = 0; a < 3; ++a) {
    if (!(options.extent[a] >= 1.6)) throw ConfigError("synth: extent must be at least 1.6 m per axis");
  }
  if (!(options.spacing > 0.0)) throw ConfigError("synth: spacing must be positive");
  if (options.snap && !(options.snap_cell > 0.0)) throw ConfigError("synth: snap_cell must be positive");
  std::vector<PointCloud> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    Rng rng(splitmix64(seed ^ splitmix64(i)));
    out.push_back(make_scene(rng, options));
  }
  return out;
}

std::vector<PointCloud> synth_part_shapes(std::uint64_t seed, std::size_t count, const SynthPartOptions& options) {
  if (options.points == 0) throw ConfigError("synth: part shapes need at least one point");
  std::vector<PointCloud> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    Rng rng(splitmix64(seed ^ splitmix64(i + 0x5eed)));
    out.push_back(make_part_shape(rng, static_cast<std::int32_t>(i % 2), options.points));
  }
  return out;
}

PartTable synth_part_table() { return {{0, {0, 1}}, {1, {2, 3}}}; }

std::vector<CaptionFrame> synth_caption_frames(std::uint64_t seed, std::size_t count, std::size_t caption_count,
                                               const SynthSceneOptions& options) {
  if (caption_count < 3) throw ConfigError("synth: need at least three captions");
  auto scenes = synth_scenes(seed, count, options);
  std::vector<CaptionFrame> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    Rng rng(splitmix64(seed ^ splitmix64(i + 0xca9)));
    CaptionFrame f;
    f.cloud = std::move(scenes[i]);
    f.targets.assign(caption_count, 0);
    std::vector<std::int32_t> ids(caption_count);
    for (std::size_t k = 0; k < caption_count; ++k) ids[k] = static_cast<std::int32_t>(k);
    std::shuffle(ids.begin(), ids.end(), rng);
    for (int k = 0; k < 3; ++k) f.targets[static_cast<std::size_t>(ids[static_cast<std::size_t>(k)])] = 1;
    out.push_back(std::move(f));
  }
  return out;
}

}  // namespace fcpn
