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

#ifndef FCPN_POOLING_HPP
#define FCPN_POOLING_HPP

#include "fcpn/grid.hpp"
#include "fcpn/ops.hpp"

namespace fcpn {

/// Raw weight of a cell at center distance d for a sphere of radius R:
/// a triangle peaking at d == R, zero at d == 0 and for d >= 2R.
double sphere_weight(double distance, double radius);

/// Row-normalised mixing matrix of weighted_average_pool for a volume of
/// the given dims. Row i excludes cell i. Rows whose raw weights are all
/// zero fall back to a uniform average over the other cells; a single-cell
/// volume gets an empty row.
ops::MixMatrix sphere_pooling_matrix(const Dims& dims, double cell_size, double radius);

/// Parameterless long-range context: every cell becomes the sphere-weighted
/// average of all other cells of the [X,Y,Z,C] volume.
template <typename T>
Var<T> weighted_average_pool(const Var<T>& top, double cell_size, double radius);

}  // namespace fcpn

#endif  // FCPN_POOLING_HPP
