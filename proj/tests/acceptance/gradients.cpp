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

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <random>

#include "criteria.hpp"
#include "fcpn/grad_check.hpp"
#include "fcpn/model.hpp"
#include "fcpn/ops.hpp"
#include "fcpn/pooling.hpp"
#include "oracles.hpp"

namespace acceptance {

using namespace fcpn;

namespace {

Var<double> param(Shape s, std::mt19937_64& rng) { return Var<double>(oracle::random_tensor(std::move(s), rng), true); }

Var<double> project(const Var<double>& y, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  return ops::weighted_sum(y, oracle::random_tensor(y.shape(), rng));
}

// Two S3 cells per axis: 8^3 S1 cells, 2^3 pooled cells.
FcpnConfig tiny(HeadType head) {
  FcpnConfig c = head == HeadType::voxel ? FcpnConfig::voxel_preset()
                 : head == HeadType::point ? FcpnConfig::part_preset()
                                           : FcpnConfig::caption_preset();
  c.s1 = 0.25;
  c.s2 = 0.5;
  c.s3 = 1.0;
  c.extent = {2.0, 2.0, 2.0};
  c.pool_radius = 1.0;
  c.pointnet_widths = {4, 4};
  c.stage2_width = 4;
  c.stage3_width = 4;
  c.skip_width = 3;
  c.merge_width = 4;
  c.head_width = 3;
  c.output_cell = 0.125;
  c.class_count = head == HeadType::voxel ? 4 : 3;
  c.object_classes = 2;
  c.point_head_widths = {4, 4};
  c.caption_widths = {5, 4};
  c.caption_count = 6;
  return c;
}

// Zero-initialised biases meet the all-zero features of empty cells exactly
// at the ReLU kink; probe at a generic point instead.
template <typename M>
void jitter(M& model, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-0.1, 0.1);
  for (auto& p : model.parameters())
    for (auto& v : p.mutable_value().data()) v += u(rng);
}

// Central differences, except where the two one-sided differences disagree:
// then a ReLU or max kink lies within one step of the probe, and the
// analytic value has to match the one-sided difference from the smooth
// side. A wrong gradient fails either way since in smooth regions both
// one-sided differences agree with each other and not with it.
struct KinkAwareResult {
  double worst = 0.0;
  std::size_t probes = 0;
  std::size_t kinks = 0;
};

KinkAwareResult kink_aware_check(const std::function<Var<double>()>& fn, std::vector<Var<double>> inputs,
                                 const GradCheckOptions& opt) {
  for (auto& in : inputs) in.zero_grad();
  fn().backward();
  std::mt19937_64 rng(opt.seed);
  KinkAwareResult r;
  auto rel = [&](double a, double n) { return std::abs(a - n) / std::max({std::abs(a), std::abs(n), opt.floor}); };
  for (auto& in : inputs) {
    const std::size_t n = in.value().size();
    std::vector<std::size_t> idx(n);
    std::iota(idx.begin(), idx.end(), 0);
    if (n > opt.samples_per_input) {
      std::shuffle(idx.begin(), idx.end(), rng);
      idx.resize(opt.samples_per_input);
    }
    const Tensor<double> analytic = in.has_grad() ? in.grad() : Tensor<double>(in.shape());
    for (auto i : idx) {
      double& x = in.mutable_value()[i];
      const double saved = x;
      double fp, f0, fm;
      {
        NoGradGuard guard;
        f0 = fn().value()[0];
        x = saved + opt.step;
        fp = fn().value()[0];
        x = saved - opt.step;
        fm = fn().value()[0];
      }
      x = saved;
      const double a = analytic[i];
      const double right = (fp - f0) / opt.step, left = (f0 - fm) / opt.step;
      double err = rel(a, (fp - fm) / (2.0 * opt.step));
      if (rel(left, right) > 1e-3) {
        ++r.kinks;
        err = std::min(rel(a, left), rel(a, right));
      }
      r.worst = std::max(r.worst, err);
      ++r.probes;
    }
  }
  return r;
}

PointCloud cloud_in(const FcpnConfig& c, std::mt19937_64& rng, std::size_t n, double lo) {
  PointCloud p;
  std::uniform_real_distribution<double> u(lo, lo + c.extent[0]);
  for (std::size_t i = 0; i < n; ++i) p.points.push_back({u(rng), u(rng), u(rng)});
  return p;
}

}  // namespace

Outcome gradient_suite() {
  Stopwatch clock;
  std::mt19937_64 rng(2024);
  GradCheckOptions opt;
  opt.samples_per_input = 12;
  double worst = 0.0;
  std::string worst_name;
  std::size_t checks = 0;
  std::size_t probes = 0, kinks = 0;
  auto record = [&](const std::string& name, const KinkAwareResult& r) {
    ++checks;
    probes += r.probes;
    kinks += r.kinks;
    if (r.worst > worst) {
      worst = r.worst;
      worst_name = name;
    }
  };

  for (int k = 1; k <= 3; ++k) {
    for (int stride = 1; stride <= 2; ++stride) {
      const std::size_t n = k % 2 == 1 && stride == 2 ? 5 : 4;
      auto x = param({n, n, n, 2}, rng);
      auto w = param({std::size_t(k), std::size_t(k), std::size_t(k), 2, 3}, rng);
      auto b = param({3}, rng);
      record(fmt("conv3d k=%d s=%d", k, stride),
             kink_aware_check([&] { return project(ops::conv3d(x, w, b, stride), 1); }, {x, w, b}, opt));
    }
  }
  {
    auto x = param({3, 4, 2, 2}, rng);
    auto w = param({3, 3, 3, 2, 3}, rng);
    auto b = param({3}, rng);
    record("conv3d symmetric",
           kink_aware_check([&] { return project(ops::conv3d(x, w, b, 1, ops::Padding::symmetric), 2); }, {x, w, b}, opt));
  }
  for (int s = 2; s <= 3; ++s) {
    auto x = param({2, 3, 2, 3}, rng);
    auto w = param({std::size_t(s), std::size_t(s), std::size_t(s), 2, 3}, rng);
    auto b = param({2}, rng);
    record(fmt("deconv3d s=%d", s), kink_aware_check([&] { return project(ops::deconv3d(x, w, b, s), 3); }, {x, w, b}, opt));
  }
  {
    auto x = param({5, 4}, rng);
    auto w = param({4, 3}, rng);
    auto b = param({3}, rng);
    record("pointwise_linear", kink_aware_check([&] { return project(ops::pointwise_linear(x, w, b), 4); }, {x, w, b}, opt));
  }
  {
    auto x = param({3 * 6, 4}, rng);
    const std::vector<std::size_t> counts{6, 0, 3};
    record("group_max", kink_aware_check([&] { return project(ops::group_max(ops::reshape(x, {3, 6, 4}), counts), 5); },
                                   {x}, opt));
    const std::vector<std::size_t> starts{0, 7, 7, 12};
    const std::vector<std::size_t> rc{7, 0, 5, 6};
    record("range_max", kink_aware_check([&] { return project(ops::range_max(x, starts, rc), 6); }, {x}, opt));
  }
  {
    auto a = param({4, 5}, rng);
    auto c = param({4, 2}, rng);
    record("relu/concat/add/scale", kink_aware_check(
                                        [&] {
                                          auto y = ops::concat_channels(ops::relu(a), ops::scale(c, -1.5));
                                          return project(ops::add(y, ops::reshape(ops::relu(ops::scale(y, 2.0)), {4, 7})), 7);
                                        },
                                        {a, c}, opt));
    record("dropout", kink_aware_check(
                          [&] {
                            Rng fixed(11);
                            return project(ops::dropout(a, 0.5, true, fixed), 8);
                          },
                          {a}, opt));
  }
  {
    auto logits = param({9, 4}, rng);
    const std::vector<std::int32_t> t{0, 1, 2, 3, 3, 2, 1, 0, 2};
    const std::vector<double> w{0.5, 2.0, 1.0, 3.0};
    record("weighted_softmax_xent",
           kink_aware_check([&] { return ops::weighted_softmax_xent(logits, t, w); }, {logits}, opt));
    auto z = param({6}, rng);
    const std::vector<std::int32_t> bt{1, 0, 0, 1, 1, 0};
    const std::vector<double> bw{1.0, 2.0, 0.5, 1.0, 3.0, 1.5};
    record("sigmoid_bce", kink_aware_check([&] { return ops::sigmoid_bce(z, bt, bw); }, {z}, opt));
  }
  {
    auto v = param({4, 3, 2, 3}, rng);
    record("sphere pool", kink_aware_check([&] { return project(weighted_average_pool(v, 0.5, 1.0), 9); }, {v}, opt));
    ops::MixMatrix m;
    m.cols = 4;
    m.push(2, 0.25);
    m.push(0, 0.75);
    m.end_row();
    m.end_row();
    m.push(3, 1.0);
    m.end_row();
    auto r = param({4, 3}, rng);
    record("mix_rows", kink_aware_check([&] { return project(ops::mix_rows(r, m), 10); }, {r}, opt));
  }

  // Merge path from the six skip volumes and the pooled top level.
  {
    const auto cfg = tiny(HeadType::voxel);
    FcpnModel<double> model(cfg, 5);
    jitter(model, rng);
    auto vol = [&](std::size_t n, std::size_t c, double cs) {
      return FeatureVolume<double>{{0, 0, 0}, cs, param({n, n, n, c}, rng)};
    };
    const std::array<std::pair<FeatureVolume<double>, FeatureVolume<double>>, 3> skips{
        std::make_pair(vol(8, 3, 0.25), vol(8, 3, 0.25)), std::make_pair(vol(4, 3, 0.5), vol(4, 3, 0.5)),
        std::make_pair(vol(2, 3, 1.0), vol(2, 3, 1.0))};
    auto top = vol(2, 4, 1.0);
    std::vector<Var<double>> inputs{top.features};
    for (const auto& [a, b] : skips) {
      inputs.push_back(a.features);
      inputs.push_back(b.features);
    }
    for (const auto& p : model.parameters()) inputs.push_back(p);
    record("merge path", kink_aware_check(
                             [&] {
                               auto [s3, s1] = model.merge(skips, model.pool(top));
                               return ops::add(project(s1.features, 12), project(s3.features, 13));
                             },
                             inputs, opt));
  }

  // Whole networks with each head, against every parameter tensor.
  {
    const auto cfg = tiny(HeadType::voxel);
    FcpnModel<double> model(cfg, 6);
    jitter(model, rng);
    const auto cloud = cloud_in(cfg, rng, 300, 0.0);
    const auto canvas = make_canvas(cfg, {0, 0, 0}, cfg.extent);
    record("voxel network",
           kink_aware_check([&] { return project(model.forward_voxel(cloud, canvas, {}), 14); }, model.parameters(), opt));
  }
  {
    const auto cfg = tiny(HeadType::point);
    FcpnModel<double> model(cfg, 7);
    jitter(model, rng);
    auto cloud = cloud_in(cfg, rng, 120, -1.0);
    cloud.object_class = 1;
    const auto canvas = centered_canvas(cfg);
    record("point network",
           kink_aware_check([&] { return project(model.forward_point(cloud, canvas, {}), 15); }, model.parameters(), opt));
  }
  {
    const auto cfg = tiny(HeadType::caption);
    FcpnModel<double> model(cfg, 8);
    jitter(model, rng);
    const auto cloud = cloud_in(cfg, rng, 300, 0.0);
    const auto canvas = make_canvas(cfg, {0, 0, 0}, cfg.extent);
    const std::vector<std::int32_t> t{1, 0, 1, 0, 0, 1};
    const std::vector<double> w(6, 1.0);
    record("caption network",
           kink_aware_check([&] { return ops::sigmoid_bce(model.forward_caption(cloud, canvas, {}), t, w); },
                      model.parameters(), opt));
  }

  // Negative controls: a ReLU whose backward ignores the mask and a square
  // whose derivative is off by 1% must both be caught.
  double control = 1.0;
  {
    auto x = param({6, 5}, rng);
    auto bad_relu = [](const Var<double>& v) {
      Tensor<double> out(v.shape());
      for (std::size_t i = 0; i < out.size(); ++i) out[i] = std::max(0.0, v.value()[i]);
      return make_result<double>(std::move(out), {v}, [](Node<double>& self) {
        auto& g = self.parents[0]->ensure_grad();
        for (std::size_t i = 0; i < g.size(); ++i) g[i] += self.grad[i];
      });
    };
    auto bad_square = [](const Var<double>& v) {
      Tensor<double> out(v.shape());
      for (std::size_t i = 0; i < out.size(); ++i) out[i] = v.value()[i] * v.value()[i];
      return make_result<double>(std::move(out), {v}, [](Node<double>& self) {
        auto& p = *self.parents[0];
        auto& g = p.ensure_grad();
        for (std::size_t i = 0; i < g.size(); ++i) g[i] += 2.02 * p.value[i] * self.grad[i];
      });
    };
    GradCheckOptions all = opt;
    all.samples_per_input = 30;
    control = std::min(kink_aware_check([&] { return project(bad_relu(x), 16); }, {x}, all).worst,
                       kink_aware_check([&] { return project(bad_square(x), 17); }, {x}, all).worst);
  }

  const double secs = clock.seconds();
  return {worst < 1e-4 && control > 1e-3 && secs < 120.0,
          fmt("%zu checks, %zu probes (%zu near a kink), max rel err %.2e at %s; broken-op controls flagged at %.1e",
              checks, probes, kinks, worst, worst_name.c_str(), control)};
}

}  // namespace acceptance
