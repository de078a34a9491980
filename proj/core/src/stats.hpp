// Copyright 2026 The percspin Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef PERCSPIN_SRC_STATS_HPP
#define PERCSPIN_SRC_STATS_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <vector>

namespace percspin::detail {

struct MeanSe {
  double mean = 0.0;
  double se = 0.0;  // sample sd / sqrt(n); 0 when n < 2
};

// Mean and standard error in index order. Constant samples short-circuit
// to an exact mean with zero error, so analytically forced cases (every
// trial identical) survive float summation untouched.
inline MeanSe mean_and_se(const std::vector<double>& values) {
  MeanSe out;
  const std::size_t n = values.size();
  if (n == 0) return out;
  if (std::all_of(values.begin(), values.end(),
                  [&](double v) { return v == values.front(); })) {
    out.mean = values.front();
    return out;
  }
  double sum = 0.0;
  for (double v : values) sum += v;
  out.mean = sum / static_cast<double>(n);
  if (n < 2) return out;
  double ss = 0.0;
  for (double v : values) ss += (v - out.mean) * (v - out.mean);
  const double sd = std::sqrt(ss / static_cast<double>(n - 1));
  out.se = sd / std::sqrt(static_cast<double>(n));
  return out;
}

}  // namespace percspin::detail

#endif  // PERCSPIN_SRC_STATS_HPP
