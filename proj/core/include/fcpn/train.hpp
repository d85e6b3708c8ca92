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

#ifndef FCPN_TRAIN_HPP
#define FCPN_TRAIN_HPP

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "fcpn/augment.hpp"
#include "fcpn/metrics.hpp"
#include "fcpn/model.hpp"
#include "fcpn/synth.hpp"
#include "fcpn/volumes.hpp"

namespace fcpn {

struct TrainSchedule {
  std::size_t epochs = 5;
  double initial_lr = 0.01;
  double decay = 0.5;  // per epoch
  std::size_t batch_size = 4;
  std::uint64_t seed = 0;

  double lr_at(std::size_t epoch) const;
  void validate() const;
};

struct LossRecord {
  std::size_t step = 0;
  std::size_t epoch = 0;
  double lr = 0.0;
  double loss = 0.0;
};

/// "step,lr,loss" with a header line.
std::string loss_curve_csv(std::span<const LossRecord> curve);

struct TrainResult {
  std::vector<LossRecord> curve;
  std::vector<double> epoch_loss;  // mean step loss per epoch
  std::size_t epochs_run = 0;
};

/// Called after every epoch with (epoch, mean loss); returning false stops
/// training early.
using EpochCallback = std::function<bool(std::size_t, double)>;

struct TrainHooks {
  // Epoch checkpoints (epoch_NNN.fcpn, last.fcpn) go here when non-empty.
  std::string checkpoint_dir;
  EpochCallback on_epoch;
};

struct VoxelTrainOptions {
  AugmentParams augment = AugmentParams::voxel_defaults();
  std::size_t resample_points = 16384;  // 0 keeps the cutout as is
  std::vector<double> class_weights;    // empty: inverse-log of the label histogram
  TrainHooks hooks;
};

struct PartTrainOptions {
  AugmentParams augment = AugmentParams::part_defaults();
  std::vector<double> class_weights;
  TrainHooks hooks;
};

struct CaptionTrainOptions {
  bool freeze_backbone = true;
  std::vector<double> caption_weights;  // empty: inverse-log of caption frequencies
  TrainHooks hooks;
};

/// Mini-batch ADAM on (cutout, label grid) volumes. Every step resamples,
/// augments (re-voxelizing labels after geometric changes), runs the voxel
/// head and applies class-weighted cross-entropy over all output voxels.
/// A non-finite loss restores the last epoch's weights, writes them as
/// last_good.fcpn (when a checkpoint dir is set) and throws DivergenceError.
template <typename T>
TrainResult train_voxel(FcpnModel<T>& model, std::span<const TrainingVolume> data, const TrainSchedule& schedule,
                        const VoxelTrainOptions& options = {});

/// Part segmentation on labelled shapes with an object class each.
template <typename T>
TrainResult train_parts(FcpnModel<T>& model, std::span<const PointCloud> shapes, const TrainSchedule& schedule,
                        const PartTrainOptions& options = {});

/// Caption head training with multi-label sigmoid cross-entropy.
template <typename T>
TrainResult train_captions(FcpnModel<T>& model, std::span<const CaptionFrame> frames, const TrainSchedule& schedule,
                           const CaptionTrainOptions& options = {});

/// Voxel-head prediction over the canvas at the output cell size.
template <typename T>
VoxelLabelGrid predict_voxels(const FcpnModel<T>& model, const PointCloud& cloud, const Canvas& canvas);

/// Per-point part labels of a shape (normalized to the unit sphere inside).
/// When the table lists the shape's category the argmax is restricted to
/// its parts.
template <typename T>
std::vector<std::int32_t> predict_parts(const FcpnModel<T>& model, const PointCloud& shape, const PartTable& parts);

/// Caption logits of one frame.
template <typename T>
Tensor<T> predict_captions(const FcpnModel<T>& model, const PointCloud& cloud, const Vec3& origin);

/// Indices of the k largest scores, best first; ties go to the lower index.
template <typename T>
std::vector<std::int32_t> top_k(const Tensor<T>& scores, std::size_t k = 3);

}  // namespace fcpn

#endif  // FCPN_TRAIN_HPP
