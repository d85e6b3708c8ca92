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
#include <memory>
#include <string>

#include "fcpn/error.hpp"
#include "fcpn/ops.hpp"
#include "parallel.hpp"

namespace fcpn::ops {

template <typename T>
Var<T> pointwise_linear(const Var<T>& input, const Var<T>& weights, const Var<T>& bias) {
  const auto& x = input.value();
  const auto& w = weights.value();
  const auto& b = bias.value();
  if (x.rank() < 1) throw DimensionError("pointwise_linear: input has no channel axis");
  if (w.rank() != 2) throw DimensionError("pointwise_linear: weights must be [Cin,Cout], got " + shape_str(w.shape()));
  const std::size_t Ci = w.dim(0), Co = w.dim(1);
  if (x.shape().back() != Ci) {
    throw DimensionError("pointwise_linear: channel axis " + std::to_string(x.rank() - 1) + " has extent " +
                         std::to_string(x.shape().back()) + ", weights expect " + std::to_string(Ci));
  }
  if (b.rank() != 1 || b.dim(0) != Co) throw DimensionError("pointwise_linear: bias must be [" + std::to_string(Co) + "], got " + shape_str(b.shape()));

  const std::size_t rows = x.size() / Ci;
  Shape out_shape = x.shape();
  out_shape.back() = Co;
  Tensor<T> out(out_shape);
#pragma omp parallel for schedule(static)
  for (std::size_t r = 0; r < rows; ++r) {
    const T* xr = x.ptr() + r * Ci;
    T* o = out.ptr() + r * Co;
    for (std::size_t c = 0; c < Co; ++c) o[c] = b.ptr()[c];
    for (std::size_t ci = 0; ci < Ci; ++ci) {
      const T v = xr[ci];
      if (v == T(0)) continue;
      const T* wr = w.ptr() + ci * Co;
      for (std::size_t c = 0; c < Co; ++c) o[c] += v * wr[c];
    }
  }

  return make_result<T>(std::move(out), {input, weights, bias}, [rows, Ci, Co](Node<T>& self) {
    const Tensor<T>& g = self.grad;
    auto& in_node = *self.parents[0];
    auto& w_node = *self.parents[1];
    auto& b_node = *self.parents[2];
    if (b_node.requires_grad) {
      detail::blocked_reduce(rows, b_node.ensure_grad().ptr(), Co, [&](std::size_t begin, std::size_t end, T* acc) {
        for (std::size_t r = begin; r < end; ++r)
          for (std::size_t c = 0; c < Co; ++c) acc[c] += g.ptr()[r * Co + c];
      });
    }
    if (w_node.requires_grad) {
      const T* xv = in_node.value.ptr();
      detail::blocked_reduce(rows, w_node.ensure_grad().ptr(), Ci * Co, [&](std::size_t begin, std::size_t end, T* acc) {
        for (std::size_t r = begin; r < end; ++r) {
          const T* gr = g.ptr() + r * Co;
          for (std::size_t ci = 0; ci < Ci; ++ci) {
            const T v = xv[r * Ci + ci];
            if (v == T(0)) continue;
            T* arow = acc + ci * Co;
            for (std::size_t c = 0; c < Co; ++c) arow[c] += v * gr[c];
          }
        }
      });
    }
    if (in_node.requires_grad) {
      auto& gx = in_node.ensure_grad();
      const T* wv = w_node.value.ptr();
#pragma omp parallel for schedule(static)
      for (std::size_t r = 0; r < rows; ++r) {
        const T* gr = g.ptr() + r * Co;
        T* gi = gx.ptr() + r * Ci;
        for (std::size_t ci = 0; ci < Ci; ++ci) {
          const T* wr = wv + ci * Co;
          T sum = T(0);
          for (std::size_t c = 0; c < Co; ++c) sum += gr[c] * wr[c];
          gi[ci] += sum;
        }
      }
    }
  });
}

template <typename T>
Var<T> range_max(const Var<T>& input, std::span<const std::size_t> starts, std::span<const std::size_t> counts) {
  const auto& x = input.value();
  if (x.rank() != 2) throw DimensionError("range_max: input must be [R,C], got " + shape_str(x.shape()));
  if (starts.size() != counts.size()) throw DimensionError("range_max: starts/counts length mismatch");
  const std::size_t R = x.dim(0), C = x.dim(1), G = counts.size();
  for (std::size_t gi = 0; gi < G; ++gi) {
    if (counts[gi] > 0 && starts[gi] + counts[gi] > R) {
      throw DimensionError("range_max: group " + std::to_string(gi) + " exceeds row axis 0 of extent " + std::to_string(R));
    }
  }
  Tensor<T> out({G, C});
  // Winning row per output element; R marks an empty group.
  auto arg = std::make_shared<std::vector<std::size_t>>(G * C, R);
#pragma omp parallel for schedule(static)
  for (std::size_t gi = 0; gi < G; ++gi) {
    if (counts[gi] == 0) continue;
    T* o = out.ptr() + gi * C;
    std::size_t* a = arg->data() + gi * C;
    const std::size_t s0 = starts[gi];
    for (std::size_t c = 0; c < C; ++c) {
      o[c] = x.ptr()[s0 * C + c];
      a[c] = s0;
    }
    for (std::size_t r = s0 + 1; r < s0 + counts[gi]; ++r) {
      const T* xr = x.ptr() + r * C;
      for (std::size_t c = 0; c < C; ++c) {
        if (xr[c] > o[c]) {
          o[c] = xr[c];
          a[c] = r;
        }
      }
    }
  }
  return make_result<T>(std::move(out), {input}, [arg, G, C, R](Node<T>& self) {
    auto& in_node = *self.parents[0];
    if (!in_node.requires_grad) return;
    auto& gx = in_node.ensure_grad();
    const T* g = self.grad.ptr();
    for (std::size_t n = 0; n < G * C; ++n) {
      const std::size_t r = (*arg)[n];
      if (r < R) gx.ptr()[r * C + n % C] += g[n];
    }
  });
}

template <typename T>
Var<T> group_max(const Var<T>& input, std::span<const std::size_t> counts) {
  const auto& x = input.value();
  if (x.rank() != 3) throw DimensionError("group_max: input must be [Ncells,Pmax,C], got " + shape_str(x.shape()));
  const std::size_t N = x.dim(0), P = x.dim(1), C = x.dim(2);
  if (counts.size() != N) {
    throw DimensionError("group_max: axis 0 has extent " + std::to_string(N) + " but " + std::to_string(counts.size()) + " counts given");
  }
  std::vector<std::size_t> starts(N);
  for (std::size_t i = 0; i < N; ++i) {
    if (counts[i] > P) {
      throw DimensionError("group_max: count " + std::to_string(counts[i]) + " exceeds axis 1 extent " + std::to_string(P));
    }
    starts[i] = i * P;
  }
  return range_max<T>(reshape<T>(input, {N * P, C}), starts, counts);
}

template <typename T>
Var<T> relu(const Var<T>& x) {
  const auto& v = x.value();
  Tensor<T> out(v.shape());
  for (std::size_t i = 0; i < v.size(); ++i) out[i] = v[i] > T(0) ? v[i] : T(0);
  return make_result<T>(std::move(out), {x}, [](Node<T>& self) {
    auto& in = *self.parents[0];
    if (!in.requires_grad) return;
    auto& gx = in.ensure_grad();
    for (std::size_t i = 0; i < gx.size(); ++i)
      if (in.value[i] > T(0)) gx[i] += self.grad[i];
  });
}

template <typename T>
Var<T> dropout(const Var<T>& x, double rate, bool training, Rng& rng) {
  if (!(rate >= 0.0 && rate < 1.0)) throw ConfigError("dropout: rate must be in [0,1), got " + std::to_string(rate));
  if (!training || rate == 0.0) return x;
  const auto& v = x.value();
  const T keep_scale = static_cast<T>(1.0 / (1.0 - rate));
  auto mask = std::make_shared<Tensor<T>>(v.shape());
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  for (std::size_t i = 0; i < v.size(); ++i) (*mask)[i] = uni(rng) >= rate ? keep_scale : T(0);
  Tensor<T> out(v.shape());
  for (std::size_t i = 0; i < v.size(); ++i) out[i] = v[i] * (*mask)[i];
  return make_result<T>(std::move(out), {x}, [mask](Node<T>& self) {
    auto& in = *self.parents[0];
    if (!in.requires_grad) return;
    auto& gx = in.ensure_grad();
    for (std::size_t i = 0; i < gx.size(); ++i) gx[i] += self.grad[i] * (*mask)[i];
  });
}

template <typename T>
Var<T> concat_channels(const std::vector<Var<T>>& parts) {
  if (parts.empty()) throw DimensionError("concat_channels: nothing to concatenate");
  const Shape& s0 = parts[0].shape();
  if (s0.empty()) throw DimensionError("concat_channels: scalar input");
  std::vector<std::size_t> widths;
  std::size_t total = 0;
  for (const auto& p : parts) {
    const Shape& s = p.shape();
    if (s.size() != s0.size()) throw DimensionError("concat_channels: rank mismatch " + shape_str(s) + " vs " + shape_str(s0));
    for (std::size_t a = 0; a + 1 < s.size(); ++a) {
      if (s[a] != s0[a]) {
        throw DimensionError("concat_channels: axis " + std::to_string(a) + " extent " + std::to_string(s[a]) +
                             " != " + std::to_string(s0[a]));
      }
    }
    widths.push_back(s.back());
    total += s.back();
  }
  const std::size_t rows = shape_size(s0) / s0.back();
  Shape out_shape = s0;
  out_shape.back() = total;
  Tensor<T> out(out_shape);
  std::size_t off = 0;
  for (std::size_t k = 0; k < parts.size(); ++k) {
    const T* src = parts[k].value().ptr();
    const std::size_t w = widths[k];
    for (std::size_t r = 0; r < rows; ++r) std::copy(src + r * w, src + (r + 1) * w, out.ptr() + r * total + off);
    off += w;
  }
  return make_result<T>(std::move(out), parts, [widths, rows, total](Node<T>& self) {
    std::size_t off = 0;
    for (std::size_t k = 0; k < widths.size(); ++k) {
      auto& in = *self.parents[k];
      const std::size_t w = widths[k];
      if (in.requires_grad) {
        auto& gx = in.ensure_grad();
        for (std::size_t r = 0; r < rows; ++r)
          for (std::size_t c = 0; c < w; ++c) gx[r * w + c] += self.grad[r * total + off + c];
      }
      off += w;
    }
  });
}

template <typename T>
Var<T> reshape(const Var<T>& x, Shape shape) {
  Tensor<T> out = x.value().reshaped(std::move(shape));
  return make_result<T>(std::move(out), {x}, [](Node<T>& self) {
    auto& in = *self.parents[0];
    if (!in.requires_grad) return;
    auto& gx = in.ensure_grad();
    for (std::size_t i = 0; i < gx.size(); ++i) gx[i] += self.grad[i];
  });
}

template <typename T>
Var<T> add(const Var<T>& a, const Var<T>& b) {
  if (a.shape() != b.shape()) throw DimensionError("add: shape " + shape_str(a.shape()) + " != " + shape_str(b.shape()));
  Tensor<T> out(a.shape());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = a.value()[i] + b.value()[i];
  return make_result<T>(std::move(out), {a, b}, [](Node<T>& self) {
    for (auto& p : self.parents) {
      if (!p->requires_grad) continue;
      auto& g = p->ensure_grad();
      for (std::size_t i = 0; i < g.size(); ++i) g[i] += self.grad[i];
    }
  });
}

template <typename T>
Var<T> scale(const Var<T>& x, double factor) {
  const T f = static_cast<T>(factor);
  Tensor<T> out(x.shape());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = x.value()[i] * f;
  return make_result<T>(std::move(out), {x}, [f](Node<T>& self) {
    auto& in = *self.parents[0];
    if (!in.requires_grad) return;
    auto& g = in.ensure_grad();
    for (std::size_t i = 0; i < g.size(); ++i) g[i] += self.grad[i] * f;
  });
}

template <typename T>
Var<T> weighted_sum(const Var<T>& x, const Tensor<T>& coeffs) {
  if (coeffs.size() != x.value().size()) throw DimensionError("weighted_sum: coefficient count mismatch");
  double acc = 0.0;
  for (std::size_t i = 0; i < coeffs.size(); ++i) acc += static_cast<double>(x.value()[i]) * coeffs[i];
  auto c = std::make_shared<Tensor<T>>(coeffs);
  return make_result<T>(Tensor<T>({1}, static_cast<T>(acc)), {x}, [c](Node<T>& self) {
    auto& in = *self.parents[0];
    if (!in.requires_grad) return;
    auto& g = in.ensure_grad();
    const T s = self.grad[0];
    for (std::size_t i = 0; i < g.size(); ++i) g[i] += s * (*c)[i];
  });
}

template <typename T>
Var<T> mix_rows(const Var<T>& input, const MixMatrix& mix) {
  const auto& x = input.value();
  if (x.rank() != 2) throw DimensionError("mix_rows: input must be [rows,C], got " + shape_str(x.shape()));
  if (x.dim(0) != mix.cols) {
    throw DimensionError("mix_rows: axis 0 has extent " + std::to_string(x.dim(0)) + ", matrix expects " + std::to_string(mix.cols));
  }
  const std::size_t C = x.dim(1);
  Tensor<T> out({mix.rows, C});
#pragma omp parallel for schedule(static)
  for (std::size_t i = 0; i < mix.rows; ++i) {
    T* o = out.ptr() + i * C;
    for (std::size_t k = mix.row_ptr[i]; k < mix.row_ptr[i + 1]; ++k) {
      const T w = static_cast<T>(mix.weight[k]);
      const T* xr = x.ptr() + mix.col[k] * C;
      for (std::size_t c = 0; c < C; ++c) o[c] += w * xr[c];
    }
  }
  auto m = std::make_shared<MixMatrix>(mix);
  return make_result<T>(std::move(out), {input}, [m, C](Node<T>& self) {
    auto& in = *self.parents[0];
    if (!in.requires_grad) return;
    // Transpose so every input row is accumulated by one thread in a fixed order.
    std::vector<std::size_t> tptr(m->cols + 1, 0);
    for (auto c : m->col) ++tptr[c + 1];
    for (std::size_t j = 0; j < m->cols; ++j) tptr[j + 1] += tptr[j];
    std::vector<std::size_t> trow(m->col.size());
    std::vector<double> tw(m->col.size());
    std::vector<std::size_t> fill(tptr.begin(), tptr.end() - 1);
    for (std::size_t i = 0; i < m->rows; ++i) {
      for (std::size_t k = m->row_ptr[i]; k < m->row_ptr[i + 1]; ++k) {
        const std::size_t slot = fill[m->col[k]]++;
        trow[slot] = i;
        tw[slot] = m->weight[k];
      }
    }
    auto& gx = in.ensure_grad();
#pragma omp parallel for schedule(static)
    for (std::size_t j = 0; j < m->cols; ++j) {
      T* gj = gx.ptr() + j * C;
      for (std::size_t k = tptr[j]; k < tptr[j + 1]; ++k) {
        const T w = static_cast<T>(tw[k]);
        const T* gr = self.grad.ptr() + trow[k] * C;
        for (std::size_t c = 0; c < C; ++c) gj[c] += w * gr[c];
      }
    }
  });
}

template <typename T>
Tensor<T> softmax_last(const Tensor<T>& logits) {
  Tensor<T> out(logits.shape());
  if (logits.rank() == 0 || logits.empty()) return out;
  const std::size_t K = logits.shape().back();
  const std::size_t rows = logits.size() / K;
  for (std::size_t r = 0; r < rows; ++r) {
    const T* z = logits.ptr() + r * K;
    T* o = out.ptr() + r * K;
    T m = z[0];
    for (std::size_t k = 1; k < K; ++k) m = std::max(m, z[k]);
    T sum = T(0);
    for (std::size_t k = 0; k < K; ++k) {
      o[k] = std::exp(z[k] - m);
      sum += o[k];
    }
    for (std::size_t k = 0; k < K; ++k) o[k] /= sum;
  }
  return out;
}

template <typename T>
std::vector<std::int32_t> argmax_last(const Tensor<T>& logits) {
  if (logits.rank() == 0) return {};
  const std::size_t K = logits.shape().back();
  const std::size_t rows = K ? logits.size() / K : 0;
  std::vector<std::int32_t> out(rows, 0);
  for (std::size_t r = 0; r < rows; ++r) {
    const T* z = logits.ptr() + r * K;
    std::size_t best = 0;
    for (std::size_t k = 1; k < K; ++k)
      if (z[k] > z[best]) best = k;
    out[r] = static_cast<std::int32_t>(best);
  }
  return out;
}

#define FCPN_INSTANTIATE(T)                                                                             \
  template Var<T> pointwise_linear(const Var<T>&, const Var<T>&, const Var<T>&);                       \
  template Var<T> range_max(const Var<T>&, std::span<const std::size_t>, std::span<const std::size_t>); \
  template Var<T> group_max(const Var<T>&, std::span<const std::size_t>);                               \
  template Var<T> relu(const Var<T>&);                                                                  \
  template Var<T> dropout(const Var<T>&, double, bool, Rng&);                                           \
  template Var<T> concat_channels(const std::vector<Var<T>>&);                                          \
  template Var<T> reshape(const Var<T>&, Shape);                                                        \
  template Var<T> add(const Var<T>&, const Var<T>&);                                                    \
  template Var<T> scale(const Var<T>&, double);                                                         \
  template Var<T> weighted_sum(const Var<T>&, const Tensor<T>&);                                        \
  template Var<T> mix_rows(const Var<T>&, const MixMatrix&);                                            \
  template Tensor<T> softmax_last(const Tensor<T>&);                                                    \
  template std::vector<std::int32_t> argmax_last(const Tensor<T>&);

FCPN_INSTANTIATE(float)
FCPN_INSTANTIATE(double)
#undef FCPN_INSTANTIATE

}  // namespace fcpn::ops
