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

#ifndef FCPN_DETAIL_PARALLEL_HPP
#define FCPN_DETAIL_PARALLEL_HPP

#include <algorithm>
#include <cstddef>
#include <vector>

namespace fcpn::detail {

// Fixed block partition so that reductions sum in the same order no matter
// how many threads execute the blocks.
inline constexpr std::size_t kReduceBlock = 2048;

/// Sums body(begin, end, partial) over fixed-size item blocks into out.
/// partial has out_size zero-initialised entries per block.
template <typename T, typename Body>
void blocked_reduce(std::size_t n_items, T* out, std::size_t out_size, Body&& body) {
  const std::size_t n_blocks = (n_items + kReduceBlock - 1) / kReduceBlock;
  if (n_blocks == 0) return;
  if (n_blocks == 1) {
    std::vector<T> partial(out_size, T(0));
    body(std::size_t{0}, n_items, partial.data());
    for (std::size_t j = 0; j < out_size; ++j) out[j] += partial[j];
    return;
  }
  std::vector<T> partials(n_blocks * out_size, T(0));
#pragma omp parallel for schedule(static)
  for (std::size_t b = 0; b < n_blocks; ++b) {
    const std::size_t begin = b * kReduceBlock;
    const std::size_t end = std::min(n_items, begin + kReduceBlock);
    body(begin, end, partials.data() + b * out_size);
  }
  for (std::size_t b = 0; b < n_blocks; ++b) {
    const T* p = partials.data() + b * out_size;
    for (std::size_t j = 0; j < out_size; ++j) out[j] += p[j];
  }
}

}  // namespace fcpn::detail

#endif  // FCPN_DETAIL_PARALLEL_HPP
