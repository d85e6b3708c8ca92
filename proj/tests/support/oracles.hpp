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

// Naive reference implementations shared by unit and acceptance tests.
// Written for clarity, not speed; each mirrors a definition directly.

#ifndef FCPN_TEST_ORACLES_HPP
#define FCPN_TEST_ORACLES_HPP

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "fcpn/cloud.hpp"
#include "fcpn/tensor.hpp"

namespace oracle {

using fcpn::Tensor;

inline double& at4(Tensor<double>& t, std::size_t x, std::size_t y, std::size_t z, std::size_t c) {
  return t[((x * t.dim(1) + y) * t.dim(2) + z) * t.dim(3) + c];
}
inline double at4(const Tensor<double>& t, std::size_t x, std::size_t y, std::size_t z, std::size_t c) {
  return t[((x * t.dim(1) + y) * t.dim(2) + z) * t.dim(3) + c];
}

// Valid convolution; `replicate` pads one cell on each side by copying the
// border plane first.
inline Tensor<double> conv3d(const Tensor<double>& in, const Tensor<double>& w, const Tensor<double>& b, int stride,
                             bool replicate) {
  const std::size_t k = w.dim(0), ci = w.dim(3), co = w.dim(4);
  Tensor<double> src = in;
  if (replicate) {
    src = Tensor<double>({in.dim(0) + 2, in.dim(1) + 2, in.dim(2) + 2, ci});
    auto clampi = [](long v, std::size_t n) { return static_cast<std::size_t>(std::clamp<long>(v, 0, static_cast<long>(n) - 1)); };
    for (std::size_t x = 0; x < src.dim(0); ++x)
      for (std::size_t y = 0; y < src.dim(1); ++y)
        for (std::size_t z = 0; z < src.dim(2); ++z)
          for (std::size_t c = 0; c < ci; ++c)
            at4(src, x, y, z, c) = at4(in, clampi(static_cast<long>(x) - 1, in.dim(0)), clampi(static_cast<long>(y) - 1, in.dim(1)),
                                       clampi(static_cast<long>(z) - 1, in.dim(2)), c);
  }
  const std::size_t s = static_cast<std::size_t>(stride);
  Tensor<double> out({(src.dim(0) - k) / s + 1, (src.dim(1) - k) / s + 1, (src.dim(2) - k) / s + 1, co});
  for (std::size_t x = 0; x < out.dim(0); ++x)
    for (std::size_t y = 0; y < out.dim(1); ++y)
      for (std::size_t z = 0; z < out.dim(2); ++z)
        for (std::size_t o = 0; o < co; ++o) {
          double acc = b[o];
          for (std::size_t a = 0; a < k; ++a)
            for (std::size_t bb = 0; bb < k; ++bb)
              for (std::size_t c = 0; c < k; ++c)
                for (std::size_t i = 0; i < ci; ++i)
                  acc += at4(src, x * s + a, y * s + bb, z * s + c, i) * w[(((a * k + bb) * k + c) * ci + i) * co + o];
          at4(out, x, y, z, o) = acc;
        }
  return out;
}

// Transposed convolution with kernel == stride; weights [k,k,k,Cout,Cin].
inline Tensor<double> deconv3d(const Tensor<double>& in, const Tensor<double>& w, const Tensor<double>& b) {
  const std::size_t k = w.dim(0), co = w.dim(3), ci = w.dim(4);
  Tensor<double> out({in.dim(0) * k, in.dim(1) * k, in.dim(2) * k, co});
  for (std::size_t x = 0; x < out.dim(0); ++x)
    for (std::size_t y = 0; y < out.dim(1); ++y)
      for (std::size_t z = 0; z < out.dim(2); ++z)
        for (std::size_t o = 0; o < co; ++o) {
          double acc = b[o];
          const std::size_t a = x % k, bb = y % k, c = z % k;
          for (std::size_t i = 0; i < ci; ++i)
            acc += at4(in, x / k, y / k, z / k, i) * w[(((a * k + bb) * k + c) * co + o) * ci + i];
          at4(out, x, y, z, o) = acc;
        }
  return out;
}

inline double sphere_weight(double d, double r) { return std::max(0.0, 1.0 - std::abs(d - r) / r); }

// O(n^2) distance-weighted pooling over all other cells.
inline Tensor<double> sphere_pool(const Tensor<double>& v, double cs, double r) {
  const std::size_t X = v.dim(0), Y = v.dim(1), Z = v.dim(2), C = v.dim(3);
  Tensor<double> out(v.shape());
  for (std::size_t i = 0; i < X * Y * Z; ++i) {
    const double xi = static_cast<double>(i / (Y * Z)), yi = static_cast<double>((i / Z) % Y), zi = static_cast<double>(i % Z);
    std::vector<double> w(X * Y * Z, 0.0);
    double total = 0.0;
    for (std::size_t j = 0; j < X * Y * Z; ++j) {
      if (j == i) continue;
      const double dx = (static_cast<double>(j / (Y * Z)) - xi) * cs;
      const double dy = (static_cast<double>((j / Z) % Y) - yi) * cs;
      const double dz = (static_cast<double>(j % Z) - zi) * cs;
      w[j] = sphere_weight(std::sqrt(dx * dx + dy * dy + dz * dz), r);
      total += w[j];
    }
    if (total == 0.0) {
      for (std::size_t j = 0; j < X * Y * Z; ++j) w[j] = j == i ? 0.0 : 1.0;
      total = static_cast<double>(X * Y * Z - 1);
    }
    for (std::size_t c = 0; c < C; ++c) {
      double acc = 0.0;
      for (std::size_t j = 0; j < X * Y * Z; ++j) acc += w[j] * v[j * C + c];
      out[i * C + c] = total > 0.0 ? acc / total : 0.0;
    }
  }
  return out;
}

inline Tensor<double> random_tensor(fcpn::Shape shape, std::mt19937_64& rng, double lo = -1.0, double hi = 1.0) {
  Tensor<double> t(std::move(shape));
  std::uniform_real_distribution<double> u(lo, hi);
  for (auto& v : t.data()) v = u(rng);
  return t;
}

}  // namespace oracle

#endif  // FCPN_TEST_ORACLES_HPP
