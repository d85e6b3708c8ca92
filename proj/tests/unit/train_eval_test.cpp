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
#include <limits>
#include <random>

#include "fcpn/class_weights.hpp"
#include "fcpn/error.hpp"
#include "fcpn/metrics.hpp"
#include "fcpn/synth.hpp"
#include "fcpn/train.hpp"

using namespace fcpn;

namespace {

VoxelLabelGrid grid_of(Dims d, std::vector<std::uint8_t> labels) {
  VoxelLabelGrid g;
  g.dims = d;
  g.labels = std::move(labels);
  return g;
}

FcpnConfig tiny_part() {
  auto c = FcpnConfig::part_preset();
  c.pointnet_widths = {8};
  c.stage2_width = c.stage3_width = 8;
  c.skip_width = 4;
  c.merge_width = 8;
  c.point_head_widths = {8, 8};
  c.class_count = 4;
  c.object_classes = 2;
  return c;
}

}  // namespace

TEST_CASE("inverse log class weights") {
  const std::vector<std::uint64_t> floor_share{357, 643};
  CHECK(class_weights(floor_share)[0] == doctest::Approx(1.0 / std::log(1.557)));
  CHECK(class_weights(floor_share)[0] == doctest::Approx(2.26).epsilon(0.005));

  const std::vector<std::uint64_t> even{10, 10};
  const auto we = class_weights(even);
  CHECK(we[0] == we[1]);

  const std::vector<std::uint64_t> skew{900, 90, 10, 0};
  const auto w = class_weights(skew);
  CHECK(w[0] < w[1]);
  CHECK(w[1] < w[2]);
  CHECK(w[3] == w[2]);

  const std::vector<std::uint64_t> none{0, 0};
  CHECK_THROWS_AS(class_weights(none), InputError);
}

TEST_CASE("histograms") {
  const std::vector<std::int32_t> labels{0, 1, 1, 3};
  CHECK(label_histogram(labels, 4) == std::vector<std::uint64_t>{1, 2, 0, 1});
  const std::vector<std::int32_t> bad{5};
  CHECK_THROWS_AS(label_histogram(bad, 4), InputError);
  const std::vector<VoxelLabelGrid> grids{grid_of({2, 1, 1}, {0, 2}), grid_of({1, 1, 1}, {2})};
  CHECK(voxel_histogram(grids, 3) == std::vector<std::uint64_t>{1, 0, 2});
}

TEST_CASE("voxel accuracy averages") {
  // Class 1: 4 of 4 right; class 2: 2 of 4 right; two unoccupied voxels.
  const auto gt = grid_of({10, 1, 1}, {1, 1, 1, 1, 2, 2, 2, 2, 0, 0});
  const auto pred = grid_of({10, 1, 1}, {1, 1, 1, 1, 2, 2, 1, 0, 2, 1});
  const std::vector<double> freq{0.0, 0.9, 0.1};
  const auto r = eval_voxel(pred, gt, freq);
  CHECK(r.accuracy[1] == 1.0);
  CHECK(r.accuracy[2] == 0.5);
  CHECK(std::isnan(r.accuracy[0]));
  CHECK(r.weighted_average == doctest::Approx(0.95));
  CHECK(r.unweighted_average == doctest::Approx(0.75));
  CHECK(r.micro_accuracy == doctest::Approx(0.75));
  CHECK(r.count(2, 0) == 1);
  CHECK(r.to_csv() == "class,total,correct,accuracy\n1,4,4,1\n2,4,2,0.5\n");

  const auto same = eval_voxel(gt, gt, freq);
  CHECK(same.weighted_average == 1.0);
  CHECK(same.unweighted_average == 1.0);

  CHECK_THROWS_AS(eval_voxel(grid_of({9, 1, 1}, std::vector<std::uint8_t>(9)), gt, freq), InputError);
}

TEST_CASE("voxel report matches a brute-force recount") {
  std::mt19937_64 rng(31);
  std::uniform_int_distribution<int> lab(0, 4);
  std::vector<std::uint8_t> a(512), b(512);
  for (auto& v : a) v = static_cast<std::uint8_t>(lab(rng));
  for (auto& v : b) v = static_cast<std::uint8_t>(lab(rng));
  const std::vector<double> freq{0.0, 0.4, 0.3, 0.2, 0.1};
  const auto r = eval_voxel(grid_of({8, 8, 8}, b), grid_of({8, 8, 8}, a), freq);
  std::vector<double> total(5), correct(5);
  for (std::size_t i = 0; i < 512; ++i) {
    if (a[i] == 0) continue;
    total[a[i]] += 1;
    correct[a[i]] += a[i] == b[i];
  }
  double uw = 0, w = 0, fsum = 0;
  int present = 0;
  for (int c = 1; c < 5; ++c) {
    if (total[c] == 0) continue;
    const double acc = correct[c] / total[c];
    CHECK(r.accuracy[c] == doctest::Approx(acc));
    uw += acc;
    w += freq[c] * acc;
    fsum += freq[c];
    ++present;
  }
  CHECK(r.unweighted_average == doctest::Approx(uw / present));
  CHECK(r.weighted_average == doctest::Approx(w / fsum));
}

TEST_CASE("part IoU on a hand fixture") {
  const PartTable parts{{0, {0, 1}}, {1, {2, 3}}};
  PartShapeResult s{0, {0, 0, 0, 0, 0, 1, 1, 1, 1, 1}, {0, 0, 0, 1, 0, 1, 1, 0, 1, 1}};
  // Each part: 4 shared points out of 6 in the union.
  CHECK(shape_iou(s, parts) == doctest::Approx(2.0 / 3.0));
  PartShapeResult flat{1, std::vector<std::int32_t>(10, 2), std::vector<std::int32_t>(10, 2)};
  CHECK(shape_iou(flat, parts) == 1.0);
  PartShapeResult swapped{0, {0, 0, 1, 1}, {1, 1, 0, 0}};
  CHECK(shape_iou(swapped, parts) == 0.0);

  const std::vector<PartShapeResult> all{s, flat, swapped};
  const auto r = eval_parts(all, parts, 4);
  CHECK(r.category_miou.at(0) == doctest::Approx(1.0 / 3.0));
  CHECK(r.category_miou.at(1) == 1.0);
  CHECK(r.category_shapes.at(0) == 2);
  CHECK(r.mean_iou == doctest::Approx((2.0 / 3.0 + 1.0) / 3.0));

  PartShapeResult foreign{0, {0, 2}, {0, 0}};
  CHECK_THROWS_AS(shape_iou(foreign, parts), InputError);
}

TEST_CASE("learning rate halves every epoch") {
  TrainSchedule s;
  const std::vector<double> want{0.01, 0.005, 0.0025, 0.00125, 0.000625};
  for (std::size_t e = 0; e < 5; ++e) CHECK(s.lr_at(e) == doctest::Approx(want[e]).epsilon(1e-12));
  s.batch_size = 0;
  CHECK_THROWS_AS(s.validate(), ConfigError);
}

TEST_CASE("top k prefers lower index on ties") {
  Tensor<float> s({5}, std::vector<float>{0.5f, 0.9f, 0.5f, 0.9f, 0.1f});
  CHECK(top_k(s, 3) == std::vector<std::int32_t>{1, 3, 0});
}

TEST_CASE("synthetic scenes") {
  const auto a = synth_scenes(5, 3);
  const auto b = synth_scenes(5, 3);
  const auto one = synth_scenes(5, 2);
  REQUIRE(a.size() == 3);
  CHECK(a[1].points == b[1].points);
  CHECK(a[1].labels == b[1].labels);
  CHECK(a[1].points == one[1].points);
  CHECK(a[0].points != a[1].points);
  for (const auto& s : a) {
    const auto h = label_histogram(s.labels, synth_class::count);
    CHECK(h[0] == 0);
    CHECK(h[synth_class::floor] + h[synth_class::wall] > s.size() / 2);
    CHECK(h[synth_class::chair] + h[synth_class::table] > 0);
    const auto box = s.bounds();
    for (int ax = 0; ax < 3; ++ax) {
      CHECK(box.min[ax] >= 0.0);
      CHECK(box.max[ax] <= 2.4);
    }
    CHECK_FALSE(extract_training_volumes(s).empty());
  }
}

TEST_CASE("synthetic part shapes") {
  const auto shapes = synth_part_shapes(2, 4, {256});
  const auto table = synth_part_table();
  for (std::size_t i = 0; i < shapes.size(); ++i) {
    REQUIRE(shapes[i].size() == 256);
    CHECK(*shapes[i].object_class == static_cast<std::int32_t>(i % 2));
    const auto& own = table.at(*shapes[i].object_class);
    for (auto l : shapes[i].labels) CHECK(std::find(own.begin(), own.end(), l) != own.end());
  }
  const auto frames = synth_caption_frames(3, 2, 25);
  for (const auto& f : frames) {
    CHECK(f.targets.size() == 25);
    CHECK(std::count(f.targets.begin(), f.targets.end(), 1) == 3);
  }
}

TEST_CASE("part training is reproducible and records every step") {
  const auto shapes = synth_part_shapes(1, 4, {128});
  TrainSchedule s;
  s.epochs = 2;
  s.batch_size = 2;
  s.seed = 9;
  FcpnModel<float> a(tiny_part(), 4), b(tiny_part(), 4);
  const auto ra = train_parts(a, shapes, s);
  const auto rb = train_parts(b, shapes, s);
  REQUIRE(ra.curve.size() == 4);
  CHECK(ra.epochs_run == 2);
  CHECK(ra.curve[2].lr == doctest::Approx(0.005));
  for (std::size_t i = 0; i < ra.curve.size(); ++i) CHECK(ra.curve[i].loss == rb.curve[i].loss);
  CHECK(loss_curve_csv(ra.curve).rfind("step,lr,loss\n", 0) == 0);
  const auto ca = encode_checkpoint(a.to_checkpoint());
  CHECK(ca == encode_checkpoint(b.to_checkpoint()));
}

TEST_CASE("non-finite loss aborts training") {
  const auto shapes = synth_part_shapes(1, 2, {64});
  FcpnModel<float> m(tiny_part(), 4);
  m.parameter("head.point.2.b").node()->value.fill(std::numeric_limits<float>::quiet_NaN());
  TrainSchedule s;
  s.epochs = 1;
  s.batch_size = 1;
  CHECK_THROWS_AS(train_parts(m, shapes, s), DivergenceError);
}

TEST_CASE("early stop through the epoch callback") {
  const auto shapes = synth_part_shapes(1, 2, {64});
  FcpnModel<float> m(tiny_part(), 4);
  TrainSchedule s;
  s.epochs = 4;
  s.batch_size = 2;
  PartTrainOptions o;
  o.hooks.on_epoch = [](std::size_t epoch, double) { return epoch < 1; };
  CHECK(train_parts(m, shapes, s, o).epochs_run == 2);
}
