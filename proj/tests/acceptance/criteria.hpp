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

#ifndef FCPN_ACCEPTANCE_CRITERIA_HPP
#define FCPN_ACCEPTANCE_CRITERIA_HPP

#include <chrono>
#include <cstdio>
#include <string>

namespace acceptance {

struct Outcome {
  bool pass = false;
  std::string detail;
};

Outcome gradient_suite();
Outcome permutation_invariance();
Outcome grid_shift_equivariance();
Outcome pooling_oracle();
Outcome neighbor_search_oracle();
Outcome full_volume_shapes();
Outcome voxel_learnability();
Outcome part_learnability();
Outcome caption_contract();
Outcome determinism_and_formats();
Outcome metric_arithmetic();

class Stopwatch {
 public:
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

// Progress lines for long runs go to stderr so the verdict line stays last.
template <typename... Args>
void progress(const char* fmt, Args... args) {
  std::fprintf(stderr, fmt, args...);
  std::fputc('\n', stderr);
  std::fflush(stderr);
}

std::string fmt(const char* f, ...);

}  // namespace acceptance

#endif  // FCPN_ACCEPTANCE_CRITERIA_HPP
