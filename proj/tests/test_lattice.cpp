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

#include <algorithm>
#include <cmath>
#include <random>
#include <set>
#include <stdexcept>

#include "doctest.h"
#include "percspin/lattice.hpp"
#include "test_util.hpp"

using namespace percspin;
using test::all_weak;
using test::config_where;
using test::make_window;
using test::share_endpoint;

TEST_CASE("window bond counts match the closed formulas") {
  std::mt19937_64 rng(1);
  for (int k = 0; k < 10; ++k) {
    const int w = 2 + static_cast<int>(rng() % 40);
    const int h = 2 + static_cast<int>(rng() % 40);
    const Window win = make_window(w, h);
    CHECK(win.horizontal_bond_count() == static_cast<std::int64_t>(w - 1) * h);
    CHECK(win.vertical_bond_count() == static_cast<std::int64_t>(w) * (h - 1));
    CHECK(win.bond_count() ==
          win.horizontal_bond_count() + win.vertical_bond_count());
  }
  CHECK_THROWS_AS(validate_window(make_window(1, 5)), std::invalid_argument);
  CHECK_THROWS_AS(validate_window(make_window(5, 1)), std::invalid_argument);
}

TEST_CASE("flat numbering is a bijection onto the bonds") {
  const Window w = make_window(5, 4, -2, 7);
  std::set<std::int64_t> seen;
  for (std::int64_t f = 0; f < w.bond_count(); ++f) {
    const BondId b = bond_from_flat(w, f);
    CHECK(flat_index(w, b) == f);
    seen.insert(f);
  }
  CHECK(static_cast<std::int64_t>(seen.size()) == w.bond_count());
}

TEST_CASE("zero and one probability pin every label") {
  const Window w = make_window(9, 7);
  const BondConfig none = BondConfig::sample(w, 0.0, 42);
  const BondConfig all = BondConfig::sample(w, 1.0, 42);
  for (std::int64_t f = 0; f < w.bond_count(); ++f) {
    CHECK(none.weak_flat(f));
    CHECK(all.strong_flat(f));
  }
  CHECK(none.strong_count() == 0);
  CHECK(all.strong_count() == w.bond_count());
}

TEST_CASE("strong fraction at p=0.5 concentrates like a binomial") {
  const Window w = make_window(64, 64);
  const double bonds = static_cast<double>(w.bond_count());
  std::int64_t strong = 0;
  const int seeds = 1000;
  for (int s = 0; s < seeds; ++s) {
    strong +=
        BondConfig::sample(w, 0.5, static_cast<std::uint64_t>(s)).strong_count();
  }
  const double n = bonds * seeds;
  const double frac = static_cast<double>(strong) / n;
  const double se = std::sqrt(0.25 / n);
  CHECK(std::abs(frac - 0.5) <= 3.0 * se);
}

TEST_CASE("resampling the same key reproduces identical labels") {
  const Window w = make_window(17, 11, -3, 5);
  const BondConfig a = BondConfig::sample(w, 0.37, 123456789);
  const BondConfig b = BondConfig::sample(w, 0.37, 123456789);
  for (std::int64_t f = 0; f < w.bond_count(); ++f) {
    CHECK(a.strong_flat(f) == b.strong_flat(f));
  }
}

TEST_CASE("labels survive window enlargement and translation") {
  const std::uint64_t seed = 99;
  const Window small = make_window(8, 8, 2, -1);
  const Window large = make_window(20, 16, -4, -6);
  const Window shifted = make_window(12, 10, 0, -2);
  const BondConfig cs = BondConfig::sample(small, 0.4, seed);
  const BondConfig cl = BondConfig::sample(large, 0.4, seed);
  const BondConfig cm = BondConfig::sample(shifted, 0.4, seed);
  for (std::int64_t f = 0; f < small.bond_count(); ++f) {
    const BondId b = bond_from_flat(small, f);
    const DualPoint mid = dual_midpoint(small, b);
    // The same global bond in each covering window.
    CHECK(cs.strong(b) == cl.strong(nearest_bond(large, mid)));
    CHECK(cs.strong(b) == cm.strong(nearest_bond(shifted, mid)));
  }
}

TEST_CASE("coupled labels are monotone in p") {
  const Window w = make_window(24, 24);
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const BondConfig lo = BondConfig::sample(w, 0.2, seed);
    const BondConfig hi = BondConfig::sample(w, 0.6, seed);
    for (std::int64_t f = 0; f < w.bond_count(); ++f) {
      if (lo.strong_flat(f)) CHECK(hi.strong_flat(f));
    }
  }
}

TEST_CASE("probability outside the unit interval is rejected") {
  const Window w = make_window(4, 4);
  CHECK_THROWS_AS(BondConfig::sample(w, -0.1, 0), std::invalid_argument);
  CHECK_THROWS_AS(BondConfig::sample(w, 1.0001, 0), std::invalid_argument);
}

TEST_CASE("dual midpoints are the advertised half-integer points") {
  const Window w = make_window(6, 6);
  // (0,0)-(1,0) sits at (0.5, 0); (2,3)-(2,4) at (2, 3.5).
  CHECK(dual_midpoint(w, horizontal_bond(w, 0, 0)) == DualPoint{1, 0});
  CHECK(dual_midpoint(w, vertical_bond(w, 2, 3)) == DualPoint{4, 7});
}

TEST_CASE("nearest_bond inverts dual_midpoint on every bond") {
  const Window w = make_window(4, 4, -1, 3);
  for (std::int64_t f = 0; f < w.bond_count(); ++f) {
    const BondId b = bond_from_flat(w, f);
    CHECK(nearest_bond(w, dual_midpoint(w, b)) == b);
  }
  CHECK_THROWS_AS(nearest_bond(w, DualPoint{0, 0}), std::invalid_argument);
  CHECK_THROWS_AS(nearest_bond(w, DualPoint{999, 0}), std::out_of_range);
}

TEST_CASE("weak adjacency needs a shared endpoint and two weak labels") {
  const Window w = make_window(4, 2);
  const BondConfig weak = all_weak(w);
  const BondId a = horizontal_bond(w, 0, 0);
  const BondId b = horizontal_bond(w, 1, 0);
  const BondId c = horizontal_bond(w, 0, 1);
  CHECK(adjacent_weak(weak, a, b));       // share (1,0)
  CHECK_FALSE(adjacent_weak(weak, a, c)); // parallel rows, no shared vertex
  const BondConfig blocked =
      config_where(w, [&](BondId bond) { return bond == b; });
  CHECK_FALSE(adjacent_weak(blocked, a, b));
}

TEST_CASE("a bond between interior vertices has exactly six neighbors") {
  // 3x3 cells = 4x4 vertices; both endpoints interior leaves 3+3 others.
  const Window w = make_window(4, 4);
  const BondConfig cfg = all_weak(w);
  const BondId mid_h = horizontal_bond(w, 1, 1);
  const BondId mid_v = vertical_bond(w, 1, 1);
  for (const BondId b : {mid_h, mid_v}) {
    int adjacent = 0;
    for (std::int64_t f = 0; f < w.bond_count(); ++f) {
      if (adjacent_weak(cfg, b, bond_from_flat(w, f))) ++adjacent;
    }
    CHECK(adjacent == 6);
    CHECK(bond_neighbors(w, b).size() == 6);
  }
}

TEST_CASE("adjacency is symmetric and matches the endpoint scan") {
  const Window w = make_window(5, 4);
  const BondConfig cfg = BondConfig::sample(w, 0.35, 7);
  for (std::int64_t f = 0; f < w.bond_count(); ++f) {
    const BondId a = bond_from_flat(w, f);
    const auto neighbors = bond_neighbors(w, a);
    for (std::int64_t g = 0; g < w.bond_count(); ++g) {
      const BondId b = bond_from_flat(w, g);
      CHECK(adjacent_weak(cfg, a, b) == adjacent_weak(cfg, b, a));
      const bool listed =
          std::find(neighbors.begin(), neighbors.end(), b) != neighbors.end();
      CHECK(listed == share_endpoint(w, a, b));
      CHECK(adjacent_weak(cfg, a, b) ==
            (share_endpoint(w, a, b) && cfg.weak(a) && cfg.weak(b)));
    }
  }
}

TEST_CASE("serialization round-trips and pins the text format") {
  const Window w = make_window(3, 2);
  const BondConfig cfg = config_where(w, [&](BondId b) {
    const std::int64_t f = flat_index(w, b);
    return f == 0 || f == 2 || f == 6;
  });
  CHECK(cfg.serialize() == "3 2 0 0 0.5 0\n54\n");

  const Window big = make_window(19, 13, -4, 9);
  const BondConfig sampled = BondConfig::sample(big, 0.43, 777);
  const BondConfig back = BondConfig::deserialize(sampled.serialize());
  CHECK(back.window() == big);
  CHECK(back.p() == sampled.p());
  CHECK(back.seed() == sampled.seed());
  for (std::int64_t f = 0; f < big.bond_count(); ++f) {
    CHECK(back.strong_flat(f) == sampled.strong_flat(f));
  }
  CHECK_THROWS_AS(BondConfig::deserialize("3 2 0 0 0.5 0\nzz\n"),
                  std::invalid_argument);
  CHECK_THROWS_AS(BondConfig::deserialize("junk"), std::invalid_argument);
}

TEST_CASE("uniforms drive labels through the documented threshold") {
  const Window w = make_window(10, 10);
  const double p = 0.31;
  const BondConfig cfg = BondConfig::sample(w, p, 5);
  for (std::int64_t f = 0; f < w.bond_count(); ++f) {
    const BondId b = bond_from_flat(w, f);
    const auto [e0, e1] = bond_endpoints(w, b);
    const double u = bond_uniform(5, b.orientation, e0.x, e0.y);
    CHECK(cfg.strong(b) == (u < p));
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
  }
}
