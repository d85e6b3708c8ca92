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

#include "fcpn/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "fcpn/error.hpp"

namespace fcpn {

namespace {

void finish(EvalReport& r, std::span<const double> frequencies) {
  const std::size_t K = r.class_count;
  r.total.assign(K, 0);
  r.correct.assign(K, 0);
  r.accuracy.assign(K, std::numeric_limits<double>::quiet_NaN());
  std::uint64_t all = 0;
  std::uint64_t hits = 0;
  for (std::size_t g = 0; g < K; ++g) {
    for (std::size_t p = 0; p < K; ++p) r.total[g] += r.confusion[g * K + p];
    r.correct[g] = r.confusion[g * K + g];
    all += r.total[g];
    hits += r.correct[g];
  }
  double sum = 0.0;
  double wsum = 0.0;
  double fsum = 0.0;
  std::size_t present = 0;
  for (std::size_t c = 0; c < K; ++c) {
    if (!r.total[c]) continue;
    r.accuracy[c] = static_cast<double>(r.correct[c]) / static_cast<double>(r.total[c]);
    sum += r.accuracy[c];
    ++present;
    const double f = frequencies.empty() ? 1.0 : frequencies[c];
    wsum += f * r.accuracy[c];
    fsum += f;
  }
  r.unweighted_average = present ? sum / static_cast<double>(present) : 0.0;
  r.weighted_average = fsum > 0.0 ? wsum / fsum : 0.0;
  r.micro_accuracy = all ? static_cast<double>(hits) / static_cast<double>(all) : 0.0;
}

}  // namespace

std::string EvalReport::to_csv() const {
  std::ostringstream os;
  os.precision(17);
  os << "class,total,correct,accuracy\n";
  for (std::size_t c = 0; c < class_count; ++c) {
    if (!present(c)) continue;
    os << c << ',' << total[c] << ',' << correct[c] << ',' << accuracy[c] << '\n';
  }
  return os.str();
}

std::string EvalReport::summary() const {
  std::ostringstream os;
  os.precision(6);
  os << "weighted average:   " << weighted_average << '\n';
  os << "unweighted average: " << unweighted_average << '\n';
  os << "micro accuracy:     " << micro_accuracy << '\n';
  if (!category_miou.empty()) {
    for (const auto& [cat, miou] : category_miou) {
      os << "category " << cat << " mIoU: " << miou << " (" << category_shapes.at(cat) << " shapes)\n";
    }
    os << "mean IoU:           " << mean_iou << '\n';
  }
  return os.str();
}

EvalReport eval_voxel(std::span<const VoxelLabelGrid> preds, std::span<const VoxelLabelGrid> gts,
                      std::span<const double> class_frequencies) {
  if (preds.size() != gts.size()) {
    throw InputError("eval_voxel: " + std::to_string(preds.size()) + " predictions for " + std::to_string(gts.size()) +
                     " ground-truth grids");
  }
  const std::size_t K = class_frequencies.size();
  if (K == 0) throw InputError("eval_voxel: empty class frequency table");
  for (double f : class_frequencies)
    if (!(f >= 0.0) || !std::isfinite(f)) throw InputError("eval_voxel: frequencies must be finite and non-negative");
  EvalReport r;
  r.class_count = K;
  r.confusion.assign(K * K, 0);
  for (std::size_t s = 0; s < preds.size(); ++s) {
    const auto& p = preds[s];
    const auto& g = gts[s];
    if (p.dims != g.dims || p.labels.size() != g.labels.size()) {
      throw InputError("eval_voxel: prediction dims (" + std::to_string(p.dims[0]) + "," + std::to_string(p.dims[1]) +
                       "," + std::to_string(p.dims[2]) + ") differ from ground truth (" + std::to_string(g.dims[0]) +
                       "," + std::to_string(g.dims[1]) + "," + std::to_string(g.dims[2]) + ")");
    }
    for (std::size_t i = 0; i < g.labels.size(); ++i) {
      const std::size_t gl = g.labels[i];
      const std::size_t pl = p.labels[i];
      if (gl == 0) continue;
      if (gl >= K || pl >= K) throw InputError("eval_voxel: label outside the frequency table at voxel " + std::to_string(i));
      ++r.confusion[gl * K + pl];
    }
  }
  finish(r, class_frequencies);
  return r;
}

EvalReport eval_voxel(const VoxelLabelGrid& pred, const VoxelLabelGrid& gt, std::span<const double> class_frequencies) {
  return eval_voxel(std::span<const VoxelLabelGrid>(&pred, 1), std::span<const VoxelLabelGrid>(&gt, 1),
                    class_frequencies);
}

double shape_iou(const PartShapeResult& shape, const PartTable& parts) {
  auto it = parts.find(shape.category);
  if (it == parts.end()) throw InputError("shape_iou: unknown category " + std::to_string(shape.category));
  if (shape.gt.size() != shape.pred.size()) throw InputError("shape_iou: prediction and ground truth sizes differ");
  const auto& ids = it->second;
  auto check = [&](std::int32_t l) {
    if (std::find(ids.begin(), ids.end(), l) == ids.end()) {
      throw InputError("shape_iou: label " + std::to_string(l) + " is not a part of category " +
                       std::to_string(shape.category));
    }
  };
  for (std::size_t i = 0; i < shape.gt.size(); ++i) {
    check(shape.gt[i]);
    check(shape.pred[i]);
  }
  double sum = 0.0;
  for (auto part : ids) {
    std::size_t inter = 0;
    std::size_t uni = 0;
    for (std::size_t i = 0; i < shape.gt.size(); ++i) {
      const bool g = shape.gt[i] == part;
      const bool p = shape.pred[i] == part;
      inter += g && p;
      uni += g || p;
    }
    sum += uni ? static_cast<double>(inter) / static_cast<double>(uni) : 1.0;
  }
  return ids.empty() ? 1.0 : sum / static_cast<double>(ids.size());
}

EvalReport eval_parts(std::span<const PartShapeResult> shapes, const PartTable& parts, std::size_t class_count) {
  EvalReport r;
  r.class_count = class_count;
  r.confusion.assign(class_count * class_count, 0);
  std::map<std::int32_t, double> sums;
  for (const auto& s : shapes) {
    const double iou = shape_iou(s, parts);
    sums[s.category] += iou;
    ++r.category_shapes[s.category];
    for (std::size_t i = 0; i < s.gt.size(); ++i) {
      const auto g = static_cast<std::size_t>(s.gt[i]);
      const auto p = static_cast<std::size_t>(s.pred[i]);
      if (s.gt[i] < 0 || s.pred[i] < 0 || g >= class_count || p >= class_count) {
        throw InputError("eval_parts: label outside " + std::to_string(class_count) + " part classes");
      }
      ++r.confusion[g * class_count + p];
    }
  }
  double total = 0.0;
  for (const auto& [cat, sum] : sums) {
    r.category_miou[cat] = sum / static_cast<double>(r.category_shapes[cat]);
    total += sum;
  }
  r.mean_iou = shapes.empty() ? 0.0 : total / static_cast<double>(shapes.size());
  finish(r, {});
  return r;
}

}  // namespace fcpn
