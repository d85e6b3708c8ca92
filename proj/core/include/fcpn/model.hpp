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

#ifndef FCPN_MODEL_HPP
#define FCPN_MODEL_HPP

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "fcpn/autodiff.hpp"
#include "fcpn/checkpoint.hpp"
#include "fcpn/cloud.hpp"
#include "fcpn/config.hpp"
#include "fcpn/grid.hpp"
#include "fcpn/ops.hpp"
#include "fcpn/voxel_grid.hpp"

namespace fcpn {

/// Dense [X,Y,Z,C] features with their physical placement.
template <typename T>
struct FeatureVolume {
  Vec3 origin{0, 0, 0};
  double cell_size = 0.0;
  Var<T> features;

  Dims dims() const { return {features.dim(0), features.dim(1), features.dim(2)}; }
  std::size_t channels() const { return features.dim(3); }
};

/// Axis-aligned input volume at S1 resolution. The extent is always a whole
/// number of S3 cells; `requested` keeps the caller's extent before padding.
struct Canvas {
  Vec3 origin{0, 0, 0};
  Dims s1_dims{0, 0, 0};
  double s1 = 0.0;
  Vec3 requested{0, 0, 0};

  Vec3 extent() const {
    return {static_cast<double>(s1_dims[0]) * s1, static_cast<double>(s1_dims[1]) * s1, static_cast<double>(s1_dims[2]) * s1};
  }
  bool padded() const;
};

/// Canvas at the given origin whose extent is rounded up to S3 multiples.
Canvas make_canvas(const FcpnConfig& config, const Vec3& origin, const Vec3& extent);
/// Canvas around a cloud: origin snapped down to the S1 lattice, extent
/// padded up to S3 multiples (at least one S3 cell per axis).
Canvas canvas_for_cloud(const FcpnConfig& config, const PointCloud& cloud);
/// The configured extent centered on the coordinate origin (part shapes).
Canvas centered_canvas(const FcpnConfig& config);

struct ForwardOptions {
  bool training = false;
  Rng* rng = nullptr;  // required when training with dropout
  std::uint64_t group_seed = 0;
};

template <typename T>
struct BackboneOutput {
  Canvas canvas;
  std::size_t out_of_bounds = 0;
  FeatureVolume<T> merged_s1;
  FeatureVolume<T> merged_s3;
};

struct PointHeadStats {
  std::size_t clamped_queries = 0;
};

/// Inverse-distance weights of the three nearest S1 cell centers for each
/// query (snapping to a center closer than 1e-9). Queries outside the volume
/// are clamped onto it and counted.
ops::MixMatrix three_nn_weights(const Vec3& origin, double cell_size, const Dims& dims, std::span<const Vec3> queries,
                                PointHeadStats* stats = nullptr);

/// Argmax of [X,Y,Z,K] logits as a label grid placed at `origin`.
template <typename T>
VoxelLabelGrid logits_to_labels(const Tensor<T>& logits, const Vec3& origin, double cell_size);

/// Per-voxel class targets of a label grid in the [X,Y,Z] (z fastest)
/// order used by voxel-head logits.
std::vector<std::int32_t> voxel_targets(const VoxelLabelGrid& grid);

enum class LoadMode {
  strict,
  // Loads every non-head parameter present in the checkpoint; head
  // parameters keep their current values.
  backbone_only,
};

template <typename T>
class FcpnModel {
 public:
  FcpnModel(FcpnConfig config, std::uint64_t init_seed);

  const FcpnConfig& config() const { return config_; }

  std::vector<Var<T>>& parameters() { return params_; }
  const std::vector<Var<T>>& parameters() const { return params_; }
  const Var<T>& parameter(const std::string& name) const;
  std::size_t parameter_count() const;
  bool is_backbone(const Var<T>& p) const;
  void set_backbone_trainable(bool trainable);
  bool backbone_trainable() const { return backbone_trainable_; }

  FeatureVolume<T> pointnet_abstraction(const CellGroups& groups) const;
  FeatureVolume<T> abstraction_level(const FeatureVolume<T>& input, int level) const;
  /// (1x1x1 branch at the level's scale, 3x3x3 branch at three times it).
  std::pair<FeatureVolume<T>, FeatureVolume<T>> skip_features(const FeatureVolume<T>& level_volume, int level) const;
  FeatureVolume<T> pool(const FeatureVolume<T>& top) const;
  /// Returns (S3-level merged stack, S1-level merged output).
  std::pair<FeatureVolume<T>, FeatureVolume<T>> merge(
      const std::array<std::pair<FeatureVolume<T>, FeatureVolume<T>>, 3>& skips, const FeatureVolume<T>& pooled) const;

  BackboneOutput<T> backbone(const PointCloud& cloud, const Canvas& canvas, const ForwardOptions& options) const;

  Var<T> head_voxel(const FeatureVolume<T>& merged, const ForwardOptions& options) const;
  Var<T> head_point(const FeatureVolume<T>& merged, std::span<const Vec3> queries, std::int32_t object_class,
                    const ForwardOptions& options, PointHeadStats* stats = nullptr) const;
  Var<T> head_caption(const FeatureVolume<T>& merged_s3, const ForwardOptions& options) const;

  /// Full pipeline with the voxel head: [X*f, Y*f, Z*f, class_count] logits.
  Var<T> forward_voxel(const PointCloud& cloud, const Canvas& canvas, const ForwardOptions& options) const;
  /// Point head over the cloud's own points: [N, class_count] logits.
  Var<T> forward_point(const PointCloud& cloud, const Canvas& canvas, const ForwardOptions& options,
                       PointHeadStats* stats = nullptr) const;
  /// Caption head: [caption_count] logits. The canvas must match the
  /// configured extent.
  Var<T> forward_caption(const PointCloud& cloud, const Canvas& canvas, const ForwardOptions& options) const;

  Checkpoint to_checkpoint() const;
  void load(const Checkpoint& checkpoint, LoadMode mode = LoadMode::strict);
  static FcpnModel from_checkpoint(const Checkpoint& checkpoint);

 private:
  struct Linear {
    Var<T> w;
    Var<T> b;
  };

  Linear add_pointwise(const std::string& name, std::size_t in, std::size_t out);
  Linear add_conv(const std::string& name, std::size_t k, std::size_t in, std::size_t out);
  Linear add_deconv(const std::string& name, std::size_t k, std::size_t in, std::size_t out);
  Var<T> add_param(const std::string& name, Tensor<T> init);
  Var<T> pw_relu(const Var<T>& x, const Linear& l) const;
  Var<T> stack(const Var<T>& x, const std::vector<Linear>& layers) const;

  FcpnConfig config_;
  Rng init_rng_;
  bool backbone_trainable_ = true;
  std::vector<Var<T>> params_;
  std::map<std::string, std::size_t> index_;

  std::vector<Linear> pointnet_;
  Linear abstract2_, abstract3_;
  std::array<Linear, 3> skip_pw_, skip_conv_;
  std::vector<Linear> merge3_, merge2_, merge1_;
  Linear up3_, up2_;
  // voxel_up_ is a pointwise layer when the upsample factor is 1.
  Linear voxel_up_, voxel_out_;
  std::vector<Linear> point_head_;
  std::vector<Linear> caption_head_;
};

extern template class FcpnModel<float>;
extern template class FcpnModel<double>;

}  // namespace fcpn

#endif  // FCPN_MODEL_HPP
