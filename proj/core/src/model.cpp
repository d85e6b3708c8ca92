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

#include "fcpn/model.hpp"

#include <algorithm>
#include <cmath>

#include "fcpn/error.hpp"
#include "fcpn/pooling.hpp"

namespace fcpn {

namespace {

constexpr double kSnapDistance = 1e-9;
constexpr const char* kHeadPrefix = "head.";

std::size_t s3_cells(double extent, double s3) {
  const double n = std::ceil(extent / s3 - 1e-9);
  return n < 1.0 ? 1 : static_cast<std::size_t>(n);
}

void check_canvas(const FcpnConfig& config, const Vec3& extent) {
  for (int a = 0; a < 3; ++a) {
    if (!(extent[a] >= 0.0) || !std::isfinite(extent[a])) {
      throw ConfigError("canvas extent[" + std::to_string(a) + "] must be finite and non-negative");
    }
  }
  config.validate();
}

}  // namespace

bool Canvas::padded() const {
  const auto e = extent();
  for (int a = 0; a < 3; ++a)
    if (e[a] > requested[a] + 1e-9) return true;
  return false;
}

Canvas make_canvas(const FcpnConfig& config, const Vec3& origin, const Vec3& extent) {
  check_canvas(config, extent);
  Canvas c;
  c.origin = origin;
  c.s1 = config.s1;
  c.requested = extent;
  for (int a = 0; a < 3; ++a) c.s1_dims[a] = 4 * s3_cells(extent[a], config.s3);
  return c;
}

Canvas canvas_for_cloud(const FcpnConfig& config, const PointCloud& cloud) {
  if (cloud.size() == 0) throw InputError("canvas_for_cloud: empty cloud");
  const Aabb box = cloud.bounds();
  Vec3 origin{};
  Vec3 extent{};
  for (int a = 0; a < 3; ++a) {
    origin[a] = std::floor(box.min[a] / config.s1 + 1e-9) * config.s1;
    extent[a] = box.max[a] - origin[a];
  }
  return make_canvas(config, origin, extent);
}

Canvas centered_canvas(const FcpnConfig& config) {
  const auto& e = config.extent;
  return make_canvas(config, {-e[0] / 2, -e[1] / 2, -e[2] / 2}, e);
}

ops::MixMatrix three_nn_weights(const Vec3& origin, double cell_size, const Dims& dims, std::span<const Vec3> queries,
                                PointHeadStats* stats) {
  ops::MixMatrix mix;
  mix.cols = dims[0] * dims[1] * dims[2];
  if (mix.cols == 0) throw DimensionError("three_nn_weights: empty volume");
  std::vector<std::pair<double, std::size_t>> cand;
  for (const auto& q0 : queries) {
    Vec3 q = q0;
    bool clamped = false;
    std::array<std::size_t, 3> cell{};
    for (int a = 0; a < 3; ++a) {
      const double hi = origin[a] + cell_size * static_cast<double>(dims[a]);
      if (!(q[a] >= origin[a])) {
        q[a] = origin[a];
        clamped = true;
      } else if (q[a] > hi) {
        q[a] = hi;
        clamped = true;
      }
      const auto i = static_cast<std::size_t>(std::max(0.0, std::floor((q[a] - origin[a]) / cell_size)));
      cell[a] = std::min(i, dims[a] - 1);
    }
    if (clamped && stats) ++stats->clamped_queries;

    cand.clear();
    for (std::size_t i = cell[0] > 0 ? cell[0] - 1 : 0; i <= std::min(cell[0] + 1, dims[0] - 1); ++i) {
      for (std::size_t j = cell[1] > 0 ? cell[1] - 1 : 0; j <= std::min(cell[1] + 1, dims[1] - 1); ++j) {
        for (std::size_t k = cell[2] > 0 ? cell[2] - 1 : 0; k <= std::min(cell[2] + 1, dims[2] - 1); ++k) {
          const double dx = origin[0] + (static_cast<double>(i) + 0.5) * cell_size - q[0];
          const double dy = origin[1] + (static_cast<double>(j) + 0.5) * cell_size - q[1];
          const double dz = origin[2] + (static_cast<double>(k) + 0.5) * cell_size - q[2];
          cand.emplace_back(std::sqrt(dx * dx + dy * dy + dz * dz), (i * dims[1] + j) * dims[2] + k);
        }
      }
    }
    const std::size_t n = std::min<std::size_t>(3, cand.size());
    std::partial_sort(cand.begin(), cand.begin() + static_cast<std::ptrdiff_t>(n), cand.end());
    if (cand[0].first < kSnapDistance) {
      mix.push(cand[0].second, 1.0);
    } else {
      double total = 0.0;
      for (std::size_t m = 0; m < n; ++m) total += 1.0 / cand[m].first;
      for (std::size_t m = 0; m < n; ++m) mix.push(cand[m].second, (1.0 / cand[m].first) / total);
    }
    mix.end_row();
  }
  return mix;
}

template <typename T>
VoxelLabelGrid logits_to_labels(const Tensor<T>& logits, const Vec3& origin, double cell_size) {
  if (logits.rank() != 4) throw DimensionError("logits_to_labels: expected [X,Y,Z,K], got " + shape_str(logits.shape()));
  if (logits.dim(3) > 256) throw DimensionError("logits_to_labels: more than 256 classes");
  VoxelLabelGrid grid;
  grid.origin = origin;
  grid.cell_size = cell_size;
  grid.dims = {logits.dim(0), logits.dim(1), logits.dim(2)};
  grid.labels.assign(grid.size(), 0);
  const auto arg = ops::argmax_last(logits);
  std::size_t n = 0;
  for (std::size_t x = 0; x < grid.dims[0]; ++x)
    for (std::size_t y = 0; y < grid.dims[1]; ++y)
      for (std::size_t z = 0; z < grid.dims[2]; ++z) grid.at(x, y, z) = static_cast<std::uint8_t>(arg[n++]);
  return grid;
}

template VoxelLabelGrid logits_to_labels(const Tensor<float>&, const Vec3&, double);
template VoxelLabelGrid logits_to_labels(const Tensor<double>&, const Vec3&, double);

std::vector<std::int32_t> voxel_targets(const VoxelLabelGrid& grid) {
  std::vector<std::int32_t> out;
  out.reserve(grid.size());
  for (std::size_t x = 0; x < grid.dims[0]; ++x)
    for (std::size_t y = 0; y < grid.dims[1]; ++y)
      for (std::size_t z = 0; z < grid.dims[2]; ++z) out.push_back(grid.at(x, y, z));
  return out;
}

// ---------------------------------------------------------------------------

template <typename T>
FcpnModel<T>::FcpnModel(FcpnConfig config, std::uint64_t init_seed) : config_(std::move(config)), init_rng_(init_seed) {
  config_.validate();
  const auto& c = config_;

  std::size_t in = 3;
  for (std::size_t i = 0; i < c.pointnet_widths.size(); ++i) {
    pointnet_.push_back(add_pointwise("pointnet." + std::to_string(i), in, c.pointnet_widths[i]));
    in = c.pointnet_widths[i];
  }
  const std::array<std::size_t, 3> widths{c.stage1_width(), c.stage2_width, c.stage3_width};
  abstract2_ = add_conv("abstract2", 2, widths[0], widths[1]);
  abstract3_ = add_conv("abstract3", 2, widths[1], widths[2]);
  for (std::size_t l = 0; l < 3; ++l) {
    const auto tag = "skip" + std::to_string(l + 1);
    skip_pw_[l] = add_pointwise(tag + ".pw", widths[l], c.skip_width);
    skip_conv_[l] = add_conv(tag + ".conv", 3, widths[l], c.skip_width);
  }

  auto merge_stack = [&](const std::string& tag, std::size_t first_in) {
    std::vector<Linear> layers;
    std::size_t w = first_in;
    for (int i = 0; i < 3; ++i) {
      layers.push_back(add_pointwise(tag + "." + std::to_string(i), w, c.merge_width));
      w = c.merge_width;
    }
    return layers;
  };
  merge3_ = merge_stack("merge3", 2 * c.skip_width + c.stage3_width);
  up3_ = add_deconv("up3", 2, c.merge_width, c.merge_width);
  merge2_ = merge_stack("merge2", c.merge_width + 2 * c.skip_width);
  up2_ = add_deconv("up2", 2, c.merge_width, c.merge_width);
  merge1_ = merge_stack("merge1", c.merge_width + 2 * c.skip_width);

  switch (c.head) {
    case HeadType::voxel: {
      const auto f = c.upsample_factor();
      if (f == 1) {
        voxel_up_ = add_pointwise("head.voxel.up", c.merge_width, c.head_width);
      } else {
        voxel_up_ = add_deconv("head.voxel.up", f, c.merge_width, c.head_width);
      }
      voxel_out_ = add_conv("head.voxel.out", 3, c.head_width, c.class_count);
      break;
    }
    case HeadType::point: {
      std::size_t w = c.merge_width + c.object_classes;
      for (std::size_t i = 0; i < 2; ++i) {
        point_head_.push_back(add_pointwise("head.point." + std::to_string(i), w, c.point_head_widths[i]));
        w = c.point_head_widths[i];
      }
      point_head_.push_back(add_pointwise("head.point.2", w, c.class_count));
      break;
    }
    case HeadType::caption: {
      const auto d = grid_dims(c.extent, c.s3);
      std::size_t w = d[0] * d[1] * d[2] * c.merge_width;
      for (std::size_t i = 0; i < 2; ++i) {
        caption_head_.push_back(add_pointwise("head.caption." + std::to_string(i), w, c.caption_widths[i]));
        w = c.caption_widths[i];
      }
      caption_head_.push_back(add_pointwise("head.caption.2", w, c.caption_count));
      break;
    }
  }
}

template <typename T>
Var<T> FcpnModel<T>::add_param(const std::string& name, Tensor<T> init) {
  auto v = Var<T>::parameter(std::move(init), name);
  index_[name] = params_.size();
  params_.push_back(v);
  return v;
}

template <typename T>
typename FcpnModel<T>::Linear FcpnModel<T>::add_pointwise(const std::string& name, std::size_t in, std::size_t out) {
  Tensor<T> w({in, out});
  const double bound = std::sqrt(6.0 / static_cast<double>(in));
  std::uniform_real_distribution<double> u(-bound, bound);
  for (auto& x : w.data()) x = static_cast<T>(u(init_rng_));
  return {add_param(name + ".w", std::move(w)), add_param(name + ".b", Tensor<T>({out}))};
}

template <typename T>
typename FcpnModel<T>::Linear FcpnModel<T>::add_conv(const std::string& name, std::size_t k, std::size_t in,
                                                     std::size_t out) {
  Tensor<T> w({k, k, k, in, out});
  const double bound = std::sqrt(6.0 / static_cast<double>(k * k * k * in));
  std::uniform_real_distribution<double> u(-bound, bound);
  for (auto& x : w.data()) x = static_cast<T>(u(init_rng_));
  return {add_param(name + ".w", std::move(w)), add_param(name + ".b", Tensor<T>({out}))};
}

template <typename T>
typename FcpnModel<T>::Linear FcpnModel<T>::add_deconv(const std::string& name, std::size_t k, std::size_t in,
                                                       std::size_t out) {
  // Every output cell receives exactly one kernel tap, so fan-in is `in`.
  Tensor<T> w({k, k, k, out, in});
  const double bound = std::sqrt(6.0 / static_cast<double>(in));
  std::uniform_real_distribution<double> u(-bound, bound);
  for (auto& x : w.data()) x = static_cast<T>(u(init_rng_));
  return {add_param(name + ".w", std::move(w)), add_param(name + ".b", Tensor<T>({out}))};
}

template <typename T>
const Var<T>& FcpnModel<T>::parameter(const std::string& name) const {
  auto it = index_.find(name);
  if (it == index_.end()) throw ConfigError("no parameter named '" + name + "'");
  return params_[it->second];
}

template <typename T>
std::size_t FcpnModel<T>::parameter_count() const {
  std::size_t n = 0;
  for (const auto& p : params_) n += p.value().size();
  return n;
}

template <typename T>
bool FcpnModel<T>::is_backbone(const Var<T>& p) const {
  return p.name().rfind(kHeadPrefix, 0) != 0;
}

template <typename T>
void FcpnModel<T>::set_backbone_trainable(bool trainable) {
  backbone_trainable_ = trainable;
  for (auto& p : params_)
    if (is_backbone(p)) p.set_requires_grad(trainable);
}

template <typename T>
Var<T> FcpnModel<T>::pw_relu(const Var<T>& x, const Linear& l) const {
  return ops::relu(ops::pointwise_linear(x, l.w, l.b));
}

template <typename T>
Var<T> FcpnModel<T>::stack(const Var<T>& x, const std::vector<Linear>& layers) const {
  Var<T> h = x;
  for (const auto& l : layers) h = pw_relu(h, l);
  return h;
}

template <typename T>
FeatureVolume<T> FcpnModel<T>::pointnet_abstraction(const CellGroups& groups) const {
  if (std::abs(groups.cell_size - config_.s1) > 1e-9 * config_.s1) {
    throw ConfigError("pointnet_abstraction: groups built at cell size " + std::to_string(groups.cell_size) +
                      ", expected s1 = " + std::to_string(config_.s1));
  }
  const std::size_t rows = groups.total_rows();
  Tensor<T> rel({rows, 3});
  for (std::size_t i = 0; i < 3 * rows; ++i) rel[i] = static_cast<T>(groups.relative[i]);
  Var<T> h = stack(Var<T>(std::move(rel)), pointnet_);
  h = ops::range_max(h, std::span<const std::size_t>(groups.starts), std::span<const std::size_t>(groups.counts));
  const auto& d = groups.dims;
  return {groups.origin, groups.cell_size, ops::reshape(h, {d[0], d[1], d[2], config_.stage1_width()})};
}

template <typename T>
FeatureVolume<T> FcpnModel<T>::abstraction_level(const FeatureVolume<T>& input, int level) const {
  if (level != 2 && level != 3) throw ConfigError("abstraction_level: level must be 2 or 3");
  const auto& l = level == 2 ? abstract2_ : abstract3_;
  auto out = ops::relu(ops::conv3d(input.features, l.w, l.b, 2));
  return {input.origin, 2.0 * input.cell_size, out};
}

template <typename T>
std::pair<FeatureVolume<T>, FeatureVolume<T>> FcpnModel<T>::skip_features(const FeatureVolume<T>& level_volume,
                                                                          int level) const {
  if (level < 1 || level > 3) throw ConfigError("skip_features: level must be 1, 2 or 3");
  const auto i = static_cast<std::size_t>(level - 1);
  auto near = pw_relu(level_volume.features, skip_pw_[i]);
  auto wide = ops::relu(ops::conv3d(level_volume.features, skip_conv_[i].w, skip_conv_[i].b, 1, ops::Padding::symmetric));
  return {{level_volume.origin, level_volume.cell_size, near}, {level_volume.origin, level_volume.cell_size, wide}};
}

template <typename T>
FeatureVolume<T> FcpnModel<T>::pool(const FeatureVolume<T>& top) const {
  if (config_.pool_mode == PoolMode::zero) return {top.origin, top.cell_size, Var<T>(Tensor<T>(top.features.shape()))};
  return {top.origin, top.cell_size, weighted_average_pool(top.features, top.cell_size, config_.pool_radius)};
}

template <typename T>
std::pair<FeatureVolume<T>, FeatureVolume<T>> FcpnModel<T>::merge(
    const std::array<std::pair<FeatureVolume<T>, FeatureVolume<T>>, 3>& skips, const FeatureVolume<T>& pooled) const {
  auto expect = [](const FeatureVolume<T>& v, const Dims& d, const char* what) {
    if (v.dims() != d) {
      throw ConfigError(std::string("merge: ") + what + " has dims " + shape_str(v.features.shape()) +
                        ", expected spatial " + shape_str({d[0], d[1], d[2]}));
    }
  };
  const Dims d3 = skips[2].first.dims();
  expect(skips[2].second, d3, "S3 wide skip");
  expect(pooled, d3, "pooled volume");
  const Dims d2{2 * d3[0], 2 * d3[1], 2 * d3[2]};
  const Dims d1{4 * d3[0], 4 * d3[1], 4 * d3[2]};
  expect(skips[1].first, d2, "S2 skip");
  expect(skips[1].second, d2, "S2 wide skip");
  expect(skips[0].first, d1, "S1 skip");
  expect(skips[0].second, d1, "S1 wide skip");

  auto h3 = stack(ops::concat_channels<T>({skips[2].first.features, skips[2].second.features, pooled.features}), merge3_);
  FeatureVolume<T> merged_s3{pooled.origin, pooled.cell_size, h3};
  auto u3 = ops::relu(ops::deconv3d(h3, up3_.w, up3_.b, 2));
  auto h2 = stack(ops::concat_channels<T>({u3, skips[1].first.features, skips[1].second.features}), merge2_);
  auto u2 = ops::relu(ops::deconv3d(h2, up2_.w, up2_.b, 2));
  auto h1 = stack(ops::concat_channels<T>({u2, skips[0].first.features, skips[0].second.features}), merge1_);
  return {merged_s3, {skips[0].first.origin, skips[0].first.cell_size, h1}};
}

template <typename T>
BackboneOutput<T> FcpnModel<T>::backbone(const PointCloud& cloud, const Canvas& canvas,
                                         const ForwardOptions& options) const {
  if (std::abs(canvas.s1 - config_.s1) > 1e-12) throw ConfigError("backbone: canvas built for a different s1");
  for (int a = 0; a < 3; ++a) {
    if (canvas.s1_dims[a] == 0 || canvas.s1_dims[a] % 4 != 0) {
      throw ConfigError("backbone: canvas dims[" + std::to_string(a) + "] = " + std::to_string(canvas.s1_dims[a]) +
                        " is not a positive multiple of 4");
    }
  }
  BackboneOutput<T> out;
  out.canvas = canvas;
  const UniformGrid grid = build_grid(cloud, canvas.origin, canvas.extent(), config_.s1);
  out.out_of_bounds = grid.out_of_bounds;
  const CellGroups groups = radius_group(cloud, grid, config_.radius(), config_.p_max, options.group_seed);

  const auto l1 = pointnet_abstraction(groups);
  const auto l2 = abstraction_level(l1, 2);
  const auto l3 = abstraction_level(l2, 3);
  const std::array<std::pair<FeatureVolume<T>, FeatureVolume<T>>, 3> skips{skip_features(l1, 1), skip_features(l2, 2),
                                                                           skip_features(l3, 3)};
  auto [s3, s1] = merge(skips, pool(l3));
  out.merged_s3 = s3;
  out.merged_s1 = s1;
  return out;
}

namespace {

template <typename T>
Var<T> maybe_dropout(const Var<T>& x, double rate, const ForwardOptions& options) {
  if (!options.training || rate == 0.0) return x;
  if (!options.rng) throw ConfigError("training forward pass needs a dropout generator");
  return ops::dropout(x, rate, true, *options.rng);
}

}  // namespace

template <typename T>
Var<T> FcpnModel<T>::head_voxel(const FeatureVolume<T>& merged, const ForwardOptions& options) const {
  if (config_.head != HeadType::voxel) throw ConfigError("head_voxel: model configured with the " +
                                                         std::string(to_string(config_.head)) + " head");
  auto h = maybe_dropout(merged.features, config_.dropout, options);
  const auto f = config_.upsample_factor();
  h = f == 1 ? ops::pointwise_linear(h, voxel_up_.w, voxel_up_.b)
             : ops::deconv3d(h, voxel_up_.w, voxel_up_.b, static_cast<int>(f));
  h = ops::relu(h);
  return ops::conv3d(h, voxel_out_.w, voxel_out_.b, 1, ops::Padding::symmetric);
}

template <typename T>
Var<T> FcpnModel<T>::head_point(const FeatureVolume<T>& merged, std::span<const Vec3> queries,
                                std::int32_t object_class, const ForwardOptions& options, PointHeadStats* stats) const {
  if (config_.head != HeadType::point) throw ConfigError("head_point: model configured with the " +
                                                         std::string(to_string(config_.head)) + " head");
  if (object_class < 0 || static_cast<std::size_t>(object_class) >= config_.object_classes) {
    throw InputError("head_point: object class " + std::to_string(object_class) + " outside [0, " +
                     std::to_string(config_.object_classes) + ")");
  }
  const Dims d = merged.dims();
  const auto mix = three_nn_weights(merged.origin, merged.cell_size, d, queries, stats);
  const std::size_t c = merged.channels();
  auto latent = ops::mix_rows(ops::reshape(merged.features, {d[0] * d[1] * d[2], c}), mix);

  Tensor<T> onehot({queries.size(), config_.object_classes});
  for (std::size_t i = 0; i < queries.size(); ++i) onehot[i * config_.object_classes + object_class] = T(1);
  auto h = ops::concat_channels(latent, Var<T>(std::move(onehot)));
  h = maybe_dropout(pw_relu(h, point_head_[0]), config_.dropout, options);
  h = maybe_dropout(pw_relu(h, point_head_[1]), config_.dropout, options);
  return ops::pointwise_linear(h, point_head_[2].w, point_head_[2].b);
}

template <typename T>
Var<T> FcpnModel<T>::head_caption(const FeatureVolume<T>& merged_s3, const ForwardOptions& options) const {
  if (config_.head != HeadType::caption) throw ConfigError("head_caption: model configured with the " +
                                                           std::string(to_string(config_.head)) + " head");
  const auto expected = grid_dims(config_.extent, config_.s3);
  if (merged_s3.dims() != expected) {
    throw ConfigError("head_caption: needs the training extent (S3 dims " + shape_str({expected[0], expected[1], expected[2]}) +
                      "), got " + shape_str(merged_s3.features.shape()));
  }
  auto h = ops::reshape(merged_s3.features, {1, merged_s3.features.value().size()});
  h = maybe_dropout(pw_relu(h, caption_head_[0]), config_.dropout, options);
  h = maybe_dropout(pw_relu(h, caption_head_[1]), config_.dropout, options);
  h = ops::pointwise_linear(h, caption_head_[2].w, caption_head_[2].b);
  return ops::reshape(h, {config_.caption_count});
}

template <typename T>
Var<T> FcpnModel<T>::forward_voxel(const PointCloud& cloud, const Canvas& canvas, const ForwardOptions& options) const {
  return head_voxel(backbone(cloud, canvas, options).merged_s1, options);
}

template <typename T>
Var<T> FcpnModel<T>::forward_point(const PointCloud& cloud, const Canvas& canvas, const ForwardOptions& options,
                                   PointHeadStats* stats) const {
  if (!cloud.object_class) throw InputError("forward_point: cloud has no object class");
  const auto b = backbone(cloud, canvas, options);
  return head_point(b.merged_s1, cloud.points, *cloud.object_class, options, stats);
}

template <typename T>
Var<T> FcpnModel<T>::forward_caption(const PointCloud& cloud, const Canvas& canvas,
                                     const ForwardOptions& options) const {
  if (config_.head != HeadType::caption) throw ConfigError("forward_caption: model has no caption head");
  return head_caption(backbone(cloud, canvas, options).merged_s3, options);
}

template <typename T>
Checkpoint FcpnModel<T>::to_checkpoint() const {
  Checkpoint ckpt;
  ckpt.config_blob = config_to_json(config_);
  for (const auto& p : params_) {
    CheckpointRecord r;
    r.name = p.name();
    r.shape = p.shape();
    r.data.resize(p.value().size());
    for (std::size_t i = 0; i < r.data.size(); ++i) r.data[i] = static_cast<float>(p.value()[i]);
    ckpt.records.push_back(std::move(r));
  }
  return ckpt;
}

template <typename T>
void FcpnModel<T>::load(const Checkpoint& checkpoint, LoadMode mode) {
  for (auto& p : params_) {
    const bool head = !is_backbone(p);
    if (head && mode == LoadMode::backbone_only) continue;
    const auto* r = checkpoint.find(p.name());
    if (!r) throw CorruptFileError("checkpoint: missing parameter '" + p.name() + "'");
    if (r->shape != p.shape()) {
      throw ConfigError("checkpoint: parameter '" + p.name() + "' has shape " + shape_str(r->shape) + ", model expects " +
                        shape_str(p.shape()));
    }
    auto& v = p.mutable_value();
    for (std::size_t i = 0; i < r->data.size(); ++i) v[i] = static_cast<T>(r->data[i]);
  }
  if (mode == LoadMode::strict) {
    for (const auto& r : checkpoint.records) {
      if (!index_.count(r.name)) throw CorruptFileError("checkpoint: unexpected parameter '" + r.name + "'");
    }
  }
}

template <typename T>
FcpnModel<T> FcpnModel<T>::from_checkpoint(const Checkpoint& checkpoint) {
  FcpnModel model(config_from_json(checkpoint.config_blob, "checkpoint.config"), 0);
  model.load(checkpoint, LoadMode::strict);
  return model;
}

template class FcpnModel<float>;
template class FcpnModel<double>;

}  // namespace fcpn
