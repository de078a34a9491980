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

#ifndef PERCSPIN_TESTS_TEST_UTIL_HPP
#define PERCSPIN_TESTS_TEST_UTIL_HPP

#include <cstdint>
#include <utility>
#include <vector>

#include "percspin/lattice.hpp"

namespace percspin::test {

inline Window make_window(int width, int height, std::int64_t ox = 0,
                          std::int64_t oy = 0) {
  Window w;
  w.width = width;
  w.height = height;
  w.origin_x = ox;
  w.origin_y = oy;
  return w;
}

// Explicit-label configuration: strong exactly where pred(bond) says so.
template <typename Pred>
BondConfig config_where(const Window& window, Pred pred) {
  std::vector<bool> strong(static_cast<std::size_t>(window.bond_count()));
  for (std::int64_t f = 0; f < window.bond_count(); ++f) {
    strong[static_cast<std::size_t>(f)] = pred(bond_from_flat(window, f));
  }
  return BondConfig::with_labels(window, 0.5, 0, strong);
}

inline BondConfig all_weak(const Window& window) {
  return BondConfig::sample(window, 0.0, 0);
}

inline BondConfig all_strong(const Window& window) {
  return BondConfig::sample(window, 1.0, 0);
}

// Brute-force adjacency: two bonds share a lattice endpoint. Independent of
// bond_neighbors.
inline bool share_endpoint(const Window& w, BondId a, BondId b) {
  if (a == b) return false;
  const auto [a0, a1] = bond_endpoints(w, a);
  const auto [b0, b1] = bond_endpoints(w, b);
  return a0 == b0 || a0 == b1 || a1 == b0 || a1 == b1;
}

}  // namespace percspin::test

#endif  // PERCSPIN_TESTS_TEST_UTIL_HPP
