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

#ifndef FCPN_CLASS_WEIGHTS_HPP
#define FCPN_CLASS_WEIGHTS_HPP

#include <cstdint>
#include <span>
#include <vector>

#include "fcpn/voxel_grid.hpp"

namespace fcpn {

/// w_c = 1 / ln(1.2 + f_c) with f_c = count_c / total. Classes with a zero
/// count get the weight of the rarest present class. Throws InputError when
/// every count is zero.
std::vector<double> class_weights(std::span<const std::uint64_t> counts);

/// Per-class voxel counts (class 0 included) over a set of label grids.
std::vector<std::uint64_t> voxel_histogram(std::span<const VoxelLabelGrid> grids, std::size_t class_count);

/// Per-class counts of integer labels; labels outside [0, class_count)
/// raise InputError.
std::vector<std::uint64_t> label_histogram(std::span<const std::int32_t> labels, std::size_t class_count);

}  // namespace fcpn

#endif  // FCPN_CLASS_WEIGHTS_HPP
