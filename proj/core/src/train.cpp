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

#include "fcpn/train.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <numeric>
#include <optional>
#include <sstream>

#include "fcpn/adam.hpp"
#include "fcpn/class_weights.hpp"
#include "fcpn/error.hpp"

namespace fcpn {

double TrainSchedule::lr_at(std::size_t epoch) const { return initial_lr * std::pow(decay, static_cast<double>(epoch)); }

void TrainSchedule::validate() const {
  if (epochs == 0) throw ConfigError("schedule.epochs: must be positive");
  if (!(initial_lr > 0.0) || !std::isfinite(initial_lr)) throw ConfigError("schedule.initial_lr: must be positive");
  if (!(decay > 0.0 && decay <= 1.0)) throw ConfigError("schedule.decay: must be in (0, 1]");
  if (batch_size == 0) throw ConfigError("schedule.batch_size: must be positive");
}

std::string loss_curve_csv(std::span<const LossRecord> curve) {
  std::ostringstream os;
  os.precision(9);
  os << "step,lr,loss\n";
  for (const auto& r : curve) os << r.step << ',' << r.lr << ',' << r.loss << '\n';
  return os.str();
}

namespace {

namespace fs = std::filesystem;

std::string epoch_name(std::size_t epoch) {
  std::string s = std::to_string(epoch);
  return "epoch_" + std::string(s.size() < 3 ? 3 - s.size() : 0, '0') + s + ".fcpn";
}

void save_to(const TrainHooks& hooks, const std::string& name, const Checkpoint& ckpt) {
  if (hooks.checkpoint_dir.empty()) return;
  fs::create_directories(hooks.checkpoint_dir);
  write_checkpoint((fs::path(hooks.checkpoint_dir) / name).string(), ckpt);
}

// Shared epoch / mini-batch loop. `sample_loss(i, rng)` returns the scalar
// loss of sample i with the graph attached.
template <typename T, typename LossFn>
TrainResult run_training(FcpnModel<T>& model, std::size_t n, const TrainSchedule& schedule, const TrainHooks& hooks,
                         Rng& rng, LossFn&& sample_loss) {
  schedule.validate();
  if (n == 0) throw InputError("training set is empty");
  TrainResult result;
  AdamState<T> adam;
  auto& params = model.parameters();
  Checkpoint last_good = model.to_checkpoint();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::size_t step = 0;

  for (std::size_t epoch = 0; epoch < schedule.epochs; ++epoch) {
    adam.learning_rate = schedule.lr_at(epoch);
    std::shuffle(order.begin(), order.end(), rng);
    double epoch_sum = 0.0;
    std::size_t batches = 0;
    for (std::size_t start = 0; start < n; start += schedule.batch_size) {
      const std::size_t end = std::min(n, start + schedule.batch_size);
      const double inv = 1.0 / static_cast<double>(end - start);
      zero_grads(params);
      double batch_loss = 0.0;
      for (std::size_t b = start; b < end; ++b) {
        Var<T> loss = sample_loss(order[b], rng);
        const double value = static_cast<double>(loss.value()[0]);
        if (!std::isfinite(value)) {
          model.load(last_good);
          save_to(hooks, "last_good.fcpn", last_good);
          throw DivergenceError("loss became " + std::to_string(value) + " at epoch " + std::to_string(epoch) +
                                ", step " + std::to_string(step) + "; weights restored to the last finished epoch");
        }
        ops::scale(loss, inv).backward();
        batch_loss += value * inv;
      }
      adam_step(params, adam);
      result.curve.push_back({step++, epoch, adam.learning_rate, batch_loss});
      epoch_sum += batch_loss;
      ++batches;
    }
    const double mean = epoch_sum / static_cast<double>(batches);
    result.epoch_loss.push_back(mean);
    result.epochs_run = epoch + 1;
    last_good = model.to_checkpoint();
    save_to(hooks, epoch_name(epoch), last_good);
    save_to(hooks, "last.fcpn", last_good);
    if (hooks.on_epoch && !hooks.on_epoch(epoch, mean)) break;
  }
  zero_grads(params);
  return result;
}

void require_head(const FcpnConfig& c, HeadType head, const char* what) {
  if (c.head != head) {
    throw ConfigError(std::string(what) + ": model has the " + to_string(c.head) + " head, expected " + to_string(head));
  }
}

}  // namespace

template <typename T>
TrainResult train_voxel(FcpnModel<T>& model, std::span<const TrainingVolume> data, const TrainSchedule& schedule,
                        const VoxelTrainOptions& options) {
  const auto& cfg = model.config();
  require_head(cfg, HeadType::voxel, "train_voxel");
  options.augment.validate();
  std::vector<double> weights = options.class_weights;
  if (weights.empty()) {
    std::vector<VoxelLabelGrid> grids;
    for (const auto& v : data) grids.push_back(v.labels);
    weights = class_weights(voxel_histogram(grids, cfg.class_count));
  }
  if (weights.size() != cfg.class_count) {
    throw ConfigError("train_voxel: " + std::to_string(weights.size()) + " class weights for " +
                      std::to_string(cfg.class_count) + " classes");
  }
  const bool geometric = options.augment.geometric();
  Rng rng(schedule.seed);

  auto sample_loss = [&](std::size_t i, Rng& r) {
    const auto& vol = data[i];
    PointCloud cloud = options.resample_points ? resample(vol.cutout, options.resample_points, r) : vol.cutout;
    auto aug = augment_with_reference(cloud, options.augment, r);
    const VoxelLabelGrid labels =
        geometric ? voxelize_labels(aug.reference, vol.origin, cfg.extent, cfg.output_cell) : vol.labels;
    const Canvas canvas = make_canvas(cfg, vol.origin, cfg.extent);
    ForwardOptions fo{true, &r, r()};
    auto logits = model.forward_voxel(aug.augmented, canvas, fo);
    const Dims d{logits.dim(0), logits.dim(1), logits.dim(2)};
    if (labels.dims != d) {
      throw DimensionError("train_voxel: label grid dims do not match the voxel head output " + shape_str(logits.shape()));
    }
    const auto targets = voxel_targets(labels);
    auto flat = ops::reshape(logits, {targets.size(), cfg.class_count});
    return ops::weighted_softmax_xent(flat, std::span<const std::int32_t>(targets), std::span<const double>(weights));
  };
  return run_training(model, data.size(), schedule, options.hooks, rng, sample_loss);
}

template <typename T>
TrainResult train_parts(FcpnModel<T>& model, std::span<const PointCloud> shapes, const TrainSchedule& schedule,
                        const PartTrainOptions& options) {
  const auto& cfg = model.config();
  require_head(cfg, HeadType::point, "train_parts");
  options.augment.validate();
  for (std::size_t i = 0; i < shapes.size(); ++i) {
    if (!shapes[i].has_labels()) throw InputError("train_parts: shape " + std::to_string(i) + " is unlabeled");
    if (!shapes[i].object_class) throw InputError("train_parts: shape " + std::to_string(i) + " has no object class");
  }
  std::vector<double> weights = options.class_weights;
  if (weights.empty()) {
    std::vector<std::int32_t> all;
    for (const auto& s : shapes) all.insert(all.end(), s.labels.begin(), s.labels.end());
    weights = class_weights(label_histogram(all, cfg.class_count));
  }
  if (weights.size() != cfg.class_count) {
    throw ConfigError("train_parts: " + std::to_string(weights.size()) + " class weights for " +
                      std::to_string(cfg.class_count) + " classes");
  }
  std::vector<PointCloud> normalized;
  for (const auto& s : shapes) normalized.push_back(normalize_unit_sphere(s).first);
  const Canvas canvas = centered_canvas(cfg);
  Rng rng(schedule.seed);

  auto sample_loss = [&](std::size_t i, Rng& r) {
    PointCloud cloud = augment(normalized[i], options.augment, r);
    ForwardOptions fo{true, &r, r()};
    auto logits = model.forward_point(cloud, canvas, fo);
    return ops::weighted_softmax_xent(logits, std::span<const std::int32_t>(cloud.labels),
                                      std::span<const double>(weights));
  };
  return run_training(model, shapes.size(), schedule, options.hooks, rng, sample_loss);
}

template <typename T>
TrainResult train_captions(FcpnModel<T>& model, std::span<const CaptionFrame> frames, const TrainSchedule& schedule,
                           const CaptionTrainOptions& options) {
  const auto& cfg = model.config();
  require_head(cfg, HeadType::caption, "train_captions");
  const std::size_t K = cfg.caption_count;
  std::vector<std::uint64_t> positives(K, 0);
  for (std::size_t i = 0; i < frames.size(); ++i) {
    if (frames[i].targets.size() != K) {
      throw InputError("train_captions: frame " + std::to_string(i) + " has " + std::to_string(frames[i].targets.size()) +
                       " targets, expected " + std::to_string(K));
    }
    for (std::size_t k = 0; k < K; ++k) positives[k] += frames[i].targets[k] != 0;
  }
  std::vector<double> weights = options.caption_weights.empty() ? class_weights(positives) : options.caption_weights;
  if (weights.size() != K) throw ConfigError("train_captions: caption weight count does not match caption_count");

  const bool was_trainable = model.backbone_trainable();
  model.set_backbone_trainable(!options.freeze_backbone);

  // A frozen backbone without augmentation yields the same S3 features every
  // epoch, so they are computed once.
  std::vector<std::optional<FeatureVolume<T>>> cached(frames.size());
  Rng rng(schedule.seed);
  auto sample_loss = [&](std::size_t i, Rng& r) {
    const auto& f = frames[i];
    ForwardOptions fo{true, &r, 0};
    FeatureVolume<T> s3;
    if (options.freeze_backbone && cached[i]) {
      s3 = *cached[i];
    } else {
      const Canvas canvas = make_canvas(cfg, f.origin, cfg.extent);
      s3 = model.backbone(f.cloud, canvas, fo).merged_s3;
      if (options.freeze_backbone) cached[i] = s3;
    }
    auto logits = model.head_caption(s3, fo);
    return ops::sigmoid_bce(logits, std::span<const std::int32_t>(f.targets), std::span<const double>(weights));
  };
  try {
    auto result = run_training(model, frames.size(), schedule, options.hooks, rng, sample_loss);
    model.set_backbone_trainable(was_trainable);
    return result;
  } catch (...) {
    model.set_backbone_trainable(was_trainable);
    throw;
  }
}

template <typename T>
VoxelLabelGrid predict_voxels(const FcpnModel<T>& model, const PointCloud& cloud, const Canvas& canvas) {
  NoGradGuard guard;
  auto logits = model.forward_voxel(cloud, canvas, ForwardOptions{});
  return logits_to_labels(logits.value(), canvas.origin, model.config().output_cell);
}

template <typename T>
std::vector<std::int32_t> predict_parts(const FcpnModel<T>& model, const PointCloud& shape, const PartTable& parts) {
  NoGradGuard guard;
  const auto normalized = normalize_unit_sphere(shape).first;
  auto logits = model.forward_point(normalized, centered_canvas(model.config()), ForwardOptions{}).value();
  const std::size_t K = logits.dim(1);
  auto it = shape.object_class ? parts.find(*shape.object_class) : parts.end();
  if (it == parts.end()) return ops::argmax_last(logits);
  for (auto id : it->second) {
    if (id < 0 || static_cast<std::size_t>(id) >= K) throw ConfigError("predict_parts: part id outside class_count");
  }
  std::vector<std::int32_t> out(logits.dim(0));
  for (std::size_t n = 0; n < out.size(); ++n) {
    std::int32_t best = it->second.front();
    for (auto id : it->second)
      if (logits[n * K + static_cast<std::size_t>(id)] > logits[n * K + static_cast<std::size_t>(best)]) best = id;
    out[n] = best;
  }
  return out;
}

template <typename T>
Tensor<T> predict_captions(const FcpnModel<T>& model, const PointCloud& cloud, const Vec3& origin) {
  NoGradGuard guard;
  return model.forward_caption(cloud, make_canvas(model.config(), origin, model.config().extent), ForwardOptions{})
      .value();
}

template <typename T>
std::vector<std::int32_t> top_k(const Tensor<T>& scores, std::size_t k) {
  std::vector<std::int32_t> idx(scores.size());
  std::iota(idx.begin(), idx.end(), 0);
  k = std::min(k, idx.size());
  std::partial_sort(idx.begin(), idx.begin() + static_cast<std::ptrdiff_t>(k), idx.end(), [&](auto a, auto b) {
    const auto sa = scores[static_cast<std::size_t>(a)];
    const auto sb = scores[static_cast<std::size_t>(b)];
    return sa > sb || (sa == sb && a < b);
  });
  idx.resize(k);
  return idx;
}

#define FCPN_INSTANTIATE(T)                                                                                        \
  template TrainResult train_voxel(FcpnModel<T>&, std::span<const TrainingVolume>, const TrainSchedule&,           \
                                   const VoxelTrainOptions&);                                                      \
  template TrainResult train_parts(FcpnModel<T>&, std::span<const PointCloud>, const TrainSchedule&,               \
                                   const PartTrainOptions&);                                                       \
  template TrainResult train_captions(FcpnModel<T>&, std::span<const CaptionFrame>, const TrainSchedule&,          \
                                      const CaptionTrainOptions&);                                                 \
  template VoxelLabelGrid predict_voxels(const FcpnModel<T>&, const PointCloud&, const Canvas&);                   \
  template std::vector<std::int32_t> predict_parts(const FcpnModel<T>&, const PointCloud&, const PartTable&);      \
  template Tensor<T> predict_captions(const FcpnModel<T>&, const PointCloud&, const Vec3&);                        \
  template std::vector<std::int32_t> top_k(const Tensor<T>&, std::size_t);

FCPN_INSTANTIATE(float)
FCPN_INSTANTIATE(double)

}  // namespace fcpn
