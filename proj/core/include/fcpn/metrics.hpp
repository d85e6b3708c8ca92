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

#ifndef FCPN_METRICS_HPP
#define FCPN_METRICS_HPP

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "fcpn/voxel_grid.hpp"

namespace fcpn {

/// Accuracy report built from a confusion matrix (rows = ground truth,
/// columns = prediction). Classes that never occur in the ground truth
/// have total 0 and are left out of both averages.
struct EvalReport {
  std::size_t class_count = 0;
  std::vector<std::uint64_t> confusion;
  std::vector<std::uint64_t> total;
  std::vector<std::uint64_t> correct;
  std::vector<double> accuracy;  // NaN for absent classes

  double unweighted_average = 0.0;
  // Frequency-weighted mean of per-class accuracies, renormalised over the
  // present classes. This is the primary weighted figure.
  double weighted_average = 0.0;
  // correct / total over all evaluated items.
  double micro_accuracy = 0.0;

  // Part mode only.
  std::map<std::int32_t, double> category_miou;
  std::map<std::int32_t, std::size_t> category_shapes;
  double mean_iou = 0.0;  // shape-count weighted over categories

  std::uint64_t count(std::size_t gt, std::size_t pred) const { return confusion[gt * class_count + pred]; }
  bool present(std::size_t c) const { return total[c] > 0; }

  /// "class,total,correct,accuracy" lines, one per present class.
  std::string to_csv() const;
  /// Human readable multi-line summary.
  std::string summary() const;
};

/// Occupied-voxel accuracy: only voxels with gt != 0 are counted.
/// class_frequencies gives the per-class weights of the weighted average
/// and fixes the class count; every label must be below it.
EvalReport eval_voxel(const VoxelLabelGrid& pred, const VoxelLabelGrid& gt, std::span<const double> class_frequencies);
EvalReport eval_voxel(std::span<const VoxelLabelGrid> preds, std::span<const VoxelLabelGrid> gts,
                      std::span<const double> class_frequencies);

/// Part class ids of every object category.
using PartTable = std::map<std::int32_t, std::vector<std::int32_t>>;

struct PartShapeResult {
  std::int32_t category = 0;
  std::vector<std::int32_t> gt;
  std::vector<std::int32_t> pred;
};

/// Intersection over union of one shape averaged over its category's parts;
/// a part absent from both prediction and ground truth scores 1.
double shape_iou(const PartShapeResult& shape, const PartTable& parts);

/// Per-category mIoU, shape-weighted overall mean, and the per-class point
/// accuracy figures of a confusion over `class_count` part classes.
EvalReport eval_parts(std::span<const PartShapeResult> shapes, const PartTable& parts, std::size_t class_count);

}  // namespace fcpn

#endif  // FCPN_METRICS_HPP
