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

#include <array>
#include <memory>
#include <string>

#include "fcpn/error.hpp"
#include "fcpn/ops.hpp"
#include "parallel.hpp"

namespace fcpn::ops {
namespace {

using Dims3 = std::array<std::size_t, 3>;

std::string axis_msg(const char* op, std::size_t axis, std::size_t got, std::size_t want) {
  return std::string(op) + ": axis " + std::to_string(axis) + " has extent " + std::to_string(got) +
         ", expected " + std::to_string(want);
}

// Edge-replicating pad by p cells on every spatial side.
template <typename T>
Tensor<T> pad_replicate(const Tensor<T>& x, std::size_t p) {
  const std::size_t X = x.dim(0), Y = x.dim(1), Z = x.dim(2), C = x.dim(3);
  Tensor<T> out({X + 2 * p, Y + 2 * p, Z + 2 * p, C});
  const std::size_t Yp = Y + 2 * p, Zp = Z + 2 * p;
  auto clampi = [](std::ptrdiff_t v, std::size_t n) {
    return static_cast<std::size_t>(std::clamp<std::ptrdiff_t>(v, 0, static_cast<std::ptrdiff_t>(n) - 1));
  };
  for (std::size_t i = 0; i < X + 2 * p; ++i) {
    const std::size_t si = clampi(static_cast<std::ptrdiff_t>(i) - static_cast<std::ptrdiff_t>(p), X);
    for (std::size_t j = 0; j < Yp; ++j) {
      const std::size_t sj = clampi(static_cast<std::ptrdiff_t>(j) - static_cast<std::ptrdiff_t>(p), Y);
      for (std::size_t l = 0; l < Zp; ++l) {
        const std::size_t sl = clampi(static_cast<std::ptrdiff_t>(l) - static_cast<std::ptrdiff_t>(p), Z);
        const T* src = x.ptr() + ((si * Y + sj) * Z + sl) * C;
        T* dst = out.ptr() + ((i * Yp + j) * Zp + l) * C;
        std::copy(src, src + C, dst);
      }
    }
  }
  return out;
}

// Adjoint of pad_replicate: folds a padded gradient back onto the source cells.
template <typename T>
void fold_replicate(const Tensor<T>& gpad, std::size_t p, Tensor<T>& gx) {
  const std::size_t X = gx.dim(0), Y = gx.dim(1), Z = gx.dim(2), C = gx.dim(3);
  const std::size_t Yp = Y + 2 * p, Zp = Z + 2 * p;
  auto clampi = [](std::ptrdiff_t v, std::size_t n) {
    return static_cast<std::size_t>(std::clamp<std::ptrdiff_t>(v, 0, static_cast<std::ptrdiff_t>(n) - 1));
  };
  for (std::size_t i = 0; i < X + 2 * p; ++i) {
    const std::size_t si = clampi(static_cast<std::ptrdiff_t>(i) - static_cast<std::ptrdiff_t>(p), X);
    for (std::size_t j = 0; j < Yp; ++j) {
      const std::size_t sj = clampi(static_cast<std::ptrdiff_t>(j) - static_cast<std::ptrdiff_t>(p), Y);
      for (std::size_t l = 0; l < Zp; ++l) {
        const std::size_t sl = clampi(static_cast<std::ptrdiff_t>(l) - static_cast<std::ptrdiff_t>(p), Z);
        const T* src = gpad.ptr() + ((i * Yp + j) * Zp + l) * C;
        T* dst = gx.ptr() + ((si * Y + sj) * Z + sl) * C;
        for (std::size_t c = 0; c < C; ++c) dst[c] += src[c];
      }
    }
  }
}

template <typename T>
void add_bias_grad(const Tensor<T>& g, std::size_t Co, Tensor<T>& gb) {
  const std::size_t cells = g.size() / Co;
  detail::blocked_reduce(cells, gb.ptr(), Co, [&](std::size_t begin, std::size_t end, T* acc) {
    for (std::size_t r = begin; r < end; ++r) {
      const T* gr = g.ptr() + r * Co;
      for (std::size_t c = 0; c < Co; ++c) acc[c] += gr[c];
    }
  });
}

}  // namespace

template <typename T>
Var<T> conv3d(const Var<T>& input, const Var<T>& weights, const Var<T>& bias, int stride, Padding padding) {
  const auto& x = input.value();
  const auto& w = weights.value();
  const auto& b = bias.value();
  if (x.rank() != 4) throw DimensionError("conv3d: input must be [X,Y,Z,C], got " + shape_str(x.shape()));
  if (w.rank() != 5) throw DimensionError("conv3d: weights must be [k,k,k,Cin,Cout], got " + shape_str(w.shape()));
  const std::size_t k = w.dim(0);
  if (w.dim(1) != k) throw DimensionError(axis_msg("conv3d weights", 1, w.dim(1), k));
  if (w.dim(2) != k) throw DimensionError(axis_msg("conv3d weights", 2, w.dim(2), k));
  const std::size_t Ci = x.dim(3);
  if (w.dim(3) != Ci) throw DimensionError(axis_msg("conv3d weights (input channels)", 3, w.dim(3), Ci));
  const std::size_t Co = w.dim(4);
  if (b.rank() != 1 || b.dim(0) != Co) throw DimensionError("conv3d: bias must be [" + std::to_string(Co) + "], got " + shape_str(b.shape()));
  if (stride != 1 && stride != 2) throw ConfigError("conv3d: stride must be 1 or 2, got " + std::to_string(stride));
  std::size_t p = 0;
  if (padding == Padding::symmetric) {
    if (k != 3) throw ConfigError("conv3d: symmetric padding requires kernel 3, got " + std::to_string(k));
    if (stride != 1) throw ConfigError("conv3d: symmetric padding requires stride 1");
    p = 1;
  }
  const std::size_t s = static_cast<std::size_t>(stride);
  Dims3 pd{}, od{};
  for (std::size_t a = 0; a < 3; ++a) {
    pd[a] = x.dim(a) + 2 * p;
    if (pd[a] < k) {
      throw DimensionError("conv3d: spatial axis " + std::to_string(a) + " extent " + std::to_string(x.dim(a)) +
                           " is smaller than kernel " + std::to_string(k));
    }
    if ((pd[a] - k) % s != 0) {
      throw ConfigError("conv3d: stride " + std::to_string(s) + " does not evenly tile axis " + std::to_string(a) +
                        " of extent " + std::to_string(x.dim(a)));
    }
    od[a] = (pd[a] - k) / s + 1;
  }

  auto padded = std::make_shared<Tensor<T>>();
  if (p > 0) *padded = pad_replicate(x, p);
  const Tensor<T>& xp = p > 0 ? *padded : x;

  Tensor<T> out({od[0], od[1], od[2], Co});
  const std::size_t k3 = k * k * k;
  {
    const T* xin = xp.ptr();
    const T* wp = w.ptr();
    const T* bp = b.ptr();
    T* op = out.ptr();
#pragma omp parallel for collapse(2) schedule(static)
    for (std::size_t i = 0; i < od[0]; ++i) {
      for (std::size_t j = 0; j < od[1]; ++j) {
        for (std::size_t l = 0; l < od[2]; ++l) {
          T* o = op + ((i * od[1] + j) * od[2] + l) * Co;
          for (std::size_t c = 0; c < Co; ++c) o[c] = bp[c];
          for (std::size_t a = 0; a < k; ++a) {
            for (std::size_t bb = 0; bb < k; ++bb) {
              for (std::size_t cc = 0; cc < k; ++cc) {
                const T* xi = xin + (((i * s + a) * pd[1] + (j * s + bb)) * pd[2] + (l * s + cc)) * Ci;
                const T* wk = wp + ((a * k + bb) * k + cc) * Ci * Co;
                for (std::size_t ci = 0; ci < Ci; ++ci) {
                  const T v = xi[ci];
                  if (v == T(0)) continue;
                  const T* wr = wk + ci * Co;
                  for (std::size_t c = 0; c < Co; ++c) o[c] += v * wr[c];
                }
              }
            }
          }
        }
      }
    }
  }

  return make_result<T>(std::move(out), {input, weights, bias},
                        [=](Node<T>& self) {
    const Tensor<T>& g = self.grad;
    auto& in_node = *self.parents[0];
    auto& w_node = *self.parents[1];
    auto& b_node = *self.parents[2];
    const Tensor<T>& xpv = p > 0 ? *padded : in_node.value;
    const Tensor<T>& wv = w_node.value;

    if (b_node.requires_grad) add_bias_grad(g, Co, b_node.ensure_grad());

    if (w_node.requires_grad) {
      auto& gw = w_node.ensure_grad();
      const std::size_t cells = od[0] * od[1] * od[2];
      detail::blocked_reduce(cells, gw.ptr(), k3 * Ci * Co, [&](std::size_t begin, std::size_t end, T* acc) {
        for (std::size_t r = begin; r < end; ++r) {
          const std::size_t l = r % od[2];
          const std::size_t j = (r / od[2]) % od[1];
          const std::size_t i = r / (od[2] * od[1]);
          const T* gr = g.ptr() + r * Co;
          for (std::size_t a = 0; a < k; ++a) {
            for (std::size_t bb = 0; bb < k; ++bb) {
              for (std::size_t cc = 0; cc < k; ++cc) {
                const T* xi = xpv.ptr() + (((i * s + a) * pd[1] + (j * s + bb)) * pd[2] + (l * s + cc)) * Ci;
                T* ak = acc + ((a * k + bb) * k + cc) * Ci * Co;
                for (std::size_t ci = 0; ci < Ci; ++ci) {
                  const T v = xi[ci];
                  if (v == T(0)) continue;
                  T* arow = ak + ci * Co;
                  for (std::size_t c = 0; c < Co; ++c) arow[c] += v * gr[c];
                }
              }
            }
          }
        }
      });
    }

    if (in_node.requires_grad) {
      Tensor<T> gpad({pd[0], pd[1], pd[2], Ci});
      // Gather formulation: each padded cell sums the outputs that read it.
#pragma omp parallel for schedule(static)
      for (std::size_t qi = 0; qi < pd[0]; ++qi) {
        for (std::size_t qj = 0; qj < pd[1]; ++qj) {
          for (std::size_t ql = 0; ql < pd[2]; ++ql) {
            T* gq = gpad.ptr() + ((qi * pd[1] + qj) * pd[2] + ql) * Ci;
            for (std::size_t a = 0; a < k && a <= qi; ++a) {
              if ((qi - a) % s) continue;
              const std::size_t oi = (qi - a) / s;
              if (oi >= od[0]) continue;
              for (std::size_t bb = 0; bb < k && bb <= qj; ++bb) {
                if ((qj - bb) % s) continue;
                const std::size_t oj = (qj - bb) / s;
                if (oj >= od[1]) continue;
                for (std::size_t cc = 0; cc < k && cc <= ql; ++cc) {
                  if ((ql - cc) % s) continue;
                  const std::size_t ol = (ql - cc) / s;
                  if (ol >= od[2]) continue;
                  const T* gr = g.ptr() + ((oi * od[1] + oj) * od[2] + ol) * Co;
                  const T* wk = wv.ptr() + ((a * k + bb) * k + cc) * Ci * Co;
                  for (std::size_t ci = 0; ci < Ci; ++ci) {
                    const T* wr = wk + ci * Co;
                    T sum = T(0);
                    for (std::size_t c = 0; c < Co; ++c) sum += gr[c] * wr[c];
                    gq[ci] += sum;
                  }
                }
              }
            }
          }
        }
      }
      auto& gx = in_node.ensure_grad();
      if (p > 0) {
        fold_replicate(gpad, p, gx);
      } else {
        for (std::size_t n = 0; n < gx.size(); ++n) gx[n] += gpad[n];
      }
    }
  });
}

template <typename T>
Var<T> deconv3d(const Var<T>& input, const Var<T>& weights, const Var<T>& bias, int stride) {
  const auto& x = input.value();
  const auto& w = weights.value();
  const auto& b = bias.value();
  if (stride != 2 && stride != 3) throw ConfigError("deconv3d: stride must be 2 or 3, got " + std::to_string(stride));
  if (x.rank() != 4) throw DimensionError("deconv3d: input must be [X,Y,Z,C], got " + shape_str(x.shape()));
  if (w.rank() != 5) throw DimensionError("deconv3d: weights must be [k,k,k,Cout,Cin], got " + shape_str(w.shape()));
  const std::size_t s = static_cast<std::size_t>(stride);
  for (std::size_t a = 0; a < 3; ++a) {
    if (w.dim(a) != s) {
      throw ConfigError("deconv3d: kernel size " + std::to_string(w.dim(a)) + " on axis " + std::to_string(a) +
                        " must equal stride " + std::to_string(s));
    }
  }
  const std::size_t Ci = x.dim(3);
  if (w.dim(4) != Ci) throw DimensionError(axis_msg("deconv3d weights (input channels)", 4, w.dim(4), Ci));
  const std::size_t Co = w.dim(3);
  if (b.rank() != 1 || b.dim(0) != Co) throw DimensionError("deconv3d: bias must be [" + std::to_string(Co) + "], got " + shape_str(b.shape()));

  const Dims3 id{x.dim(0), x.dim(1), x.dim(2)};
  const Dims3 od{id[0] * s, id[1] * s, id[2] * s};
  const std::size_t k3 = s * s * s;

  // [a][Cin][Cout] copy for a contiguous inner loop over output channels.
  std::vector<T> wt(k3 * Ci * Co);
  for (std::size_t a = 0; a < k3; ++a)
    for (std::size_t co = 0; co < Co; ++co)
      for (std::size_t ci = 0; ci < Ci; ++ci) wt[(a * Ci + ci) * Co + co] = w.ptr()[(a * Co + co) * Ci + ci];

  Tensor<T> out({od[0], od[1], od[2], Co});
#pragma omp parallel for collapse(2) schedule(static)
  for (std::size_t i = 0; i < id[0]; ++i) {
    for (std::size_t j = 0; j < id[1]; ++j) {
      for (std::size_t l = 0; l < id[2]; ++l) {
        const T* xi = x.ptr() + ((i * id[1] + j) * id[2] + l) * Ci;
        for (std::size_t a = 0; a < s; ++a) {
          for (std::size_t bb = 0; bb < s; ++bb) {
            for (std::size_t cc = 0; cc < s; ++cc) {
              T* o = out.ptr() + (((i * s + a) * od[1] + (j * s + bb)) * od[2] + (l * s + cc)) * Co;
              for (std::size_t c = 0; c < Co; ++c) o[c] = b.ptr()[c];
              const T* wk = wt.data() + ((a * s + bb) * s + cc) * Ci * Co;
              for (std::size_t ci = 0; ci < Ci; ++ci) {
                const T v = xi[ci];
                if (v == T(0)) continue;
                const T* wr = wk + ci * Co;
                for (std::size_t c = 0; c < Co; ++c) o[c] += v * wr[c];
              }
            }
          }
        }
      }
    }
  }

  return make_result<T>(std::move(out), {input, weights, bias}, [=](Node<T>& self) {
    const Tensor<T>& g = self.grad;
    auto& in_node = *self.parents[0];
    auto& w_node = *self.parents[1];
    auto& b_node = *self.parents[2];
    const Tensor<T>& xv = in_node.value;
    const Tensor<T>& wv = w_node.value;
    const std::size_t in_cells = id[0] * id[1] * id[2];

    auto out_row = [&](std::size_t r, std::size_t kidx) {
      const std::size_t l = r % id[2];
      const std::size_t j = (r / id[2]) % id[1];
      const std::size_t i = r / (id[2] * id[1]);
      const std::size_t cc = kidx % s, bb = (kidx / s) % s, a = kidx / (s * s);
      return g.ptr() + (((i * s + a) * od[1] + (j * s + bb)) * od[2] + (l * s + cc)) * Co;
    };

    if (b_node.requires_grad) add_bias_grad(g, Co, b_node.ensure_grad());

    if (w_node.requires_grad) {
      auto& gw = w_node.ensure_grad();
      detail::blocked_reduce(in_cells, gw.ptr(), k3 * Co * Ci, [&](std::size_t begin, std::size_t end, T* acc) {
        for (std::size_t r = begin; r < end; ++r) {
          const T* xi = xv.ptr() + r * Ci;
          for (std::size_t kidx = 0; kidx < k3; ++kidx) {
            const T* gr = out_row(r, kidx);
            T* ak = acc + kidx * Co * Ci;
            for (std::size_t co = 0; co < Co; ++co) {
              const T gv = gr[co];
              if (gv == T(0)) continue;
              T* arow = ak + co * Ci;
              for (std::size_t ci = 0; ci < Ci; ++ci) arow[ci] += gv * xi[ci];
            }
          }
        }
      });
    }

    if (in_node.requires_grad) {
      auto& gx = in_node.ensure_grad();
#pragma omp parallel for schedule(static)
      for (std::size_t r = 0; r < in_cells; ++r) {
        T* gi = gx.ptr() + r * Ci;
        for (std::size_t kidx = 0; kidx < k3; ++kidx) {
          const T* gr = out_row(r, kidx);
          const T* wk = wv.ptr() + kidx * Co * Ci;
          for (std::size_t co = 0; co < Co; ++co) {
            const T gv = gr[co];
            if (gv == T(0)) continue;
            const T* wr = wk + co * Ci;
            for (std::size_t ci = 0; ci < Ci; ++ci) gi[ci] += gv * wr[ci];
          }
        }
      }
    }
  });
}

template Var<float> conv3d(const Var<float>&, const Var<float>&, const Var<float>&, int, Padding);
template Var<double> conv3d(const Var<double>&, const Var<double>&, const Var<double>&, int, Padding);
template Var<float> deconv3d(const Var<float>&, const Var<float>&, const Var<float>&, int);
template Var<double> deconv3d(const Var<double>&, const Var<double>&, const Var<double>&, int);

}  // namespace fcpn::ops
