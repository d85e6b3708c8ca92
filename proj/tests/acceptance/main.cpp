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

// Runs one acceptance criterion (or all of them) and prints one verdict
// line per criterion. Exit status is nonzero if any selected criterion fails.

#include <cstdarg>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <string>
#include <vector>

#include "criteria.hpp"

namespace acceptance {

std::string fmt(const char* f, ...) {
  va_list ap;
  va_start(ap, f);
  char buf[512];
  std::vsnprintf(buf, sizeof buf, f, ap);
  va_end(ap);
  return buf;
}

}  // namespace acceptance

namespace {

struct Criterion {
  const char* name;
  acceptance::Outcome (*run)();
};

const std::vector<Criterion> kCriteria{
    {"gradient suite", acceptance::gradient_suite},
    {"permutation invariance", acceptance::permutation_invariance},
    {"grid-shift equivariance", acceptance::grid_shift_equivariance},
    {"pooling oracle", acceptance::pooling_oracle},
    {"neighbor-search oracle", acceptance::neighbor_search_oracle},
    {"full-volume shape contract", acceptance::full_volume_shapes},
    {"voxel learnability", acceptance::voxel_learnability},
    {"part-head learnability", acceptance::part_learnability},
    {"caption-head contract", acceptance::caption_contract},
    {"determinism and formats", acceptance::determinism_and_formats},
    {"metric arithmetic", acceptance::metric_arithmetic},
};

bool run(std::size_t index) {
  const auto& c = kCriteria[index];
  acceptance::Outcome o;
  acceptance::Stopwatch clock;
  try {
    o = c.run();
  } catch (const std::exception& e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  std::printf("criterion %02zu %s: %s (%s; %.1f s)\n", index + 1, c.name, o.pass ? "PASS" : "FAIL", o.detail.c_str(),
              clock.seconds());
  std::fflush(stdout);
  return o.pass;
}

}  // namespace

int main(int argc, char** argv) {
  std::vector<std::size_t> selected;
  for (int i = 1; i < argc; ++i) {
    const long n = std::strtol(argv[i], nullptr, 10);
    if (n < 1 || n > static_cast<long>(kCriteria.size())) {
      std::fprintf(stderr, "usage: %s [criterion 1-%zu ...]\n", argv[0], kCriteria.size());
      return 2;
    }
    selected.push_back(static_cast<std::size_t>(n - 1));
  }
  if (selected.empty())
    for (std::size_t i = 0; i < kCriteria.size(); ++i) selected.push_back(i);
  bool ok = true;
  for (auto i : selected) ok &= run(i);
  return ok ? 0 : 1;
}
