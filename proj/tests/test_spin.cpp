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

#include <cmath>
#include <cstdint>
#include <limits>
#include <random>
#include <stdexcept>
#include <utility>
#include <vector>

#include "doctest.h"
#include "percspin/distance.hpp"
#include "percspin/spin.hpp"
#include "test_util.hpp"

using namespace percspin;
using test::all_weak;
using test::config_where;
using test::make_window;

namespace {

// Broken-bond census computed straight from the bond list, independent of
// energy().
std::pair<std::int64_t, std::int64_t> census(const BondConfig& cfg,
                                             const SpinField& u) {
  const Window& w = cfg.window();
  std::int64_t weak = 0, strong = 0;
  for (std::int64_t f = 0; f < w.bond_count(); ++f) {
    const BondId b = bond_from_flat(w, f);
    const auto [e0, e1] = bond_endpoints(w, b);
    if (u.at(e0.x, e0.y) == u.at(e1.x, e1.y)) continue;
    (cfg.strong_flat(f) ? strong : weak) += 1;
  }
  return {strong, weak};
}

// Exhaustive minimizer over the unfrozen vertices, lexicographic in
// (broken strong, broken weak).
std::pair<std::int64_t, std::int64_t> brute_minimum(const BondConfig& cfg,
                                                    const SpinField& bc) {
  const Window& w = cfg.window();
  std::vector<std::int64_t> free_vertices;
  for (std::int64_t v = 0; v < w.vertex_count(); ++v) {
    if (!bc.frozen[static_cast<std::size_t>(v)]) free_vertices.push_back(v);
  }
  REQUIRE(free_vertices.size() <= 20);
  std::pair<std::int64_t, std::int64_t> best{
      std::numeric_limits<std::int64_t>::max(),
      std::numeric_limits<std::int64_t>::max()};
  SpinField u = bc;
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << free_vertices.size());
       ++mask) {
    for (std::size_t i = 0; i < free_vertices.size(); ++i) {
      u.values[static_cast<std::size_t>(free_vertices[i])] =
          ((mask >> i) & 1u) ? 1 : -1;
    }
    best = std::min(best, census(cfg, u));
  }
  return best;
}

SpinField random_ring(const Window& w, std::mt19937_64& rng, double eps = 1.0) {
  SpinField bc = SpinField::uniform(w, 1, eps);
  bc.frozen.assign(bc.frozen.size(), 0);
  for (std::int64_t x = w.origin_x; x < w.origin_x + w.width; ++x) {
    for (std::int64_t y = w.origin_y; y < w.origin_y + w.height; ++y) {
      const bool edge = x == w.origin_x || x == w.origin_x + w.width - 1 ||
                        y == w.origin_y || y == w.origin_y + w.height - 1;
      if (edge) bc.set(x, y, (rng() & 1u) ? 1 : -1, true);
    }
  }
  return bc;
}

}  // namespace

TEST_CASE("uniform fields cost nothing") {
  const Window w = make_window(6, 6);
  const BondConfig cfg = BondConfig::sample(w, 0.5, 3);
  const EnergyValue e = energy(cfg, SpinField::uniform(w, 1));
  CHECK(e.finite);
  CHECK(e.value == 0.0);
  CHECK(e.broken_weak == 0);
  CHECK(e.broken_strong == 0);
}

TEST_CASE("one flipped interior vertex breaks its four weak bonds") {
  const Window w = make_window(5, 5);
  SpinField u = SpinField::uniform(w, 1);
  u.set(2, 2, -1, false);
  const EnergyValue e = energy(all_weak(w), u);
  CHECK(e.finite);
  CHECK(e.broken_weak == 4);
  CHECK(e.value == 4.0);

  SpinField scaled = SpinField::uniform(w, 1, 0.25);
  scaled.set(2, 2, -1, false);
  CHECK(energy(all_weak(w), scaled).value == 1.0);
}

TEST_CASE("breaking any strong bond makes the energy infinite") {
  const Window w = make_window(5, 5);
  const BondConfig cfg = config_where(
      w, [&](BondId b) { return b == horizontal_bond(w, 2, 2); });
  SpinField u = SpinField::uniform(w, 1);
  u.set(2, 2, -1, false);
  const EnergyValue e = energy(cfg, u);
  CHECK_FALSE(e.finite);
  CHECK(std::isinf(e.value));
  CHECK(e.broken_strong == 1);
  CHECK(e.broken_weak == 3);
}

TEST_CASE("energy equals the ordered one-eighth sum on random fields") {
  std::mt19937_64 rng(101);
  const Window w = make_window(6, 6);
  for (int k = 0; k < 50; ++k) {
    const BondConfig cfg = BondConfig::sample(w, 0.3, rng());
    SpinField u = SpinField::uniform(w, 1);
    for (std::int64_t v = 0; v < w.vertex_count(); ++v) {
      u.values[static_cast<std::size_t>(v)] = (rng() & 1u) ? 1 : -1;
    }
    // (1/8) sum over ordered nearest-neighbor pairs of eps*sigma*(ui-uj)^2,
    // with infinity*0 = 0 on unbroken strong bonds.
    double ordered = 0.0;
    bool finite = true;
    for (std::int64_t f = 0; f < w.bond_count(); ++f) {
      const auto [e0, e1] = bond_endpoints(w, bond_from_flat(w, f));
      const double diff2 = u.at(e0.x, e0.y) == u.at(e1.x, e1.y) ? 0.0 : 4.0;
      if (diff2 == 0.0) continue;
      if (cfg.strong_flat(f)) {
        finite = false;
      } else {
        ordered += 2.0 * (1.0 / 8.0) * u.eps * diff2;  // both orders
      }
    }
    const EnergyValue e = energy(cfg, u);
    CHECK(e.finite == finite);
    if (finite) CHECK(e.value == ordered);
    const auto [bs, bw] = census(cfg, u);
    CHECK(e.broken_strong == bs);
    CHECK(e.broken_weak == bw);
  }
}

TEST_CASE("energy rejects mismatched windows") {
  const Window w = make_window(4, 4);
  const Window other = make_window(5, 4);
  CHECK_THROWS_AS(energy(all_weak(w), SpinField::uniform(other, 1)),
                  std::invalid_argument);
}

TEST_CASE("opposed full rows cut one flat interface") {
  const int n = 10;
  const Window w = make_window(n, n);
  const BondConfig cfg = all_weak(w);
  const GroundState rows = ground_state(cfg, boundary_rows(w));
  CHECK(rows.energy.finite);
  CHECK(rows.energy.value == static_cast<double>(n));
  CHECK(rows.energy.broken_weak == n);

  const GroundState halves = ground_state(cfg, boundary_halves(w));
  CHECK(halves.energy.value == static_cast<double>(n));
  // The ring pins the sign change at mid-height, so the flat interface is
  // the unique minimizer.
  for (std::int64_t y = 0; y < n; ++y) {
    for (std::int64_t x = 0; x < n; ++x) {
      CHECK(halves.field.at(x, y) == (2 * y >= n ? 1 : -1));
    }
  }
}

TEST_CASE("a frozen strong column with crossed signs is rigid") {
  const int m = 16;
  const Window w = make_window(2 * m + 1, 7, -m, -3);
  const BondConfig cfg = config_where(w, [&](BondId b) {
    const auto [e0, e1] = bond_endpoints(w, b);
    return e0.x == 0 && e1.x == 0;
  });
  // Top and bottom rows frozen with offset sign changes: the x=0 strong
  // column carries -1 at the top and +1 at the bottom, so every admissible
  // field breaks a strong bond.
  SpinField bc = SpinField::uniform(w, 1);
  bc.frozen.assign(bc.frozen.size(), 0);
  const std::int64_t q = (m + 1) / 2;
  for (std::int64_t x = -m; x <= m; ++x) {
    bc.set(x, 3, x < -q ? 1 : -1, true);
    bc.set(x, -3, x < q ? 1 : -1, true);
  }
  const GroundState gs = ground_state(cfg, bc);
  CHECK_FALSE(gs.energy.finite);
  CHECK(gs.energy.broken_strong >= 1);
  CHECK(std::isinf(gs.energy.value));
  // The reported census matches the realized field.
  const auto [bs, bw] = census(cfg, gs.field);
  CHECK(gs.energy.broken_strong == bs);
  CHECK(gs.energy.broken_weak == bw);
}

TEST_CASE("min-cut ground states equal exhaustive enumeration on 4x4") {
  std::mt19937_64 rng(107);
  const Window w = make_window(4, 4);
  for (const double p : {0.2, 0.5, 0.8}) {
    for (int k = 0; k < 20; ++k) {
      const BondConfig cfg = BondConfig::sample(w, p, rng());
      const SpinField bc = random_ring(w, rng);
      const GroundState gs = ground_state(cfg, bc);
      const auto expect = brute_minimum(cfg, bc);
      CHECK(gs.energy.broken_strong == expect.first);
      CHECK(gs.energy.broken_weak == expect.second);
      CHECK(gs.energy.finite == (expect.first == 0));
      // The field realizes the reported energy and honors the freeze.
      const auto [bs, bw] = census(cfg, gs.field);
      CHECK(bs == expect.first);
      CHECK(bw == expect.second);
      for (std::int64_t v = 0; v < w.vertex_count(); ++v) {
        if (bc.frozen[static_cast<std::size_t>(v)]) {
          CHECK(gs.field.values[static_cast<std::size_t>(v)] ==
                bc.values[static_cast<std::size_t>(v)]);
          CHECK(gs.field.frozen[static_cast<std::size_t>(v)] != 0);
        }
      }
    }
  }
}

TEST_CASE("no admissible field beats the reported minimum") {
  std::mt19937_64 rng(109);
  const Window w = make_window(16, 16);
  const BondConfig cfg = BondConfig::sample(w, 0.3, 11);
  const SpinField bc = boundary_halves(w);
  const GroundState gs = ground_state(cfg, bc);
  for (int k = 0; k < 1000; ++k) {
    SpinField u = bc;
    for (std::int64_t v = 0; v < w.vertex_count(); ++v) {
      if (!u.frozen[static_cast<std::size_t>(v)]) {
        u.values[static_cast<std::size_t>(v)] = (rng() & 1u) ? 1 : -1;
      }
    }
    const auto [bs, bw] = census(cfg, u);
    const bool worse_or_equal =
        bs > gs.energy.broken_strong ||
        (bs == gs.energy.broken_strong && bw >= gs.energy.broken_weak);
    CHECK(worse_or_equal);
  }
}

TEST_CASE("negating the boundary negates the ground state exactly") {
  std::mt19937_64 rng(113);
  for (const double p : {0.3, 0.6}) {
    for (int k = 0; k < 25; ++k) {
      const Window w = make_window(8, 8);
      const BondConfig cfg = BondConfig::sample(w, p, rng());
      const SpinField bc = random_ring(w, rng);
      SpinField flipped = bc;
      for (auto& v : flipped.values) v = static_cast<std::int8_t>(-v);
      const GroundState a = ground_state(cfg, bc);
      const GroundState b = ground_state(cfg, flipped);
      CHECK(a.energy.finite == b.energy.finite);
      CHECK(a.energy.broken_weak == b.energy.broken_weak);
      CHECK(a.energy.broken_strong == b.energy.broken_strong);
      for (std::size_t v = 0; v < a.field.values.size(); ++v) {
        CHECK(a.field.values[v] == -b.field.values[v]);
      }
    }
  }
}

TEST_CASE("half-plane data reduces to a chemical distance on weak windows") {
  // The flat interface is a straight weak dual path; its bond-inclusive
  // count differs from the broken-bond count by the endpoint convention.
  for (const int n : {6, 9, 13}) {
    const Window w = make_window(n, n);
    const BondConfig cfg = all_weak(w);
    const GroundState gs = ground_state(cfg, boundary_halves(w));
    // Dual points of the two boundary vertical bonds at the sign change
    // (the ring flips at local height ceil(n/2)).
    const std::int64_t y2 = 2 * ((n + 1) / 2) - 1;
    const DualPoint left{0, y2};
    const DualPoint right{2 * (n - 1), y2};
    const PathResult d = chemical_distance(cfg, left, right);
    REQUIRE(d.reachable);
    CHECK(std::abs(gs.energy.value - d.value) <= 1.0);
  }
}

TEST_CASE("ground state validates its boundary data") {
  const Window w = make_window(4, 4);
  const BondConfig cfg = all_weak(w);
  SpinField none = SpinField::uniform(w, 1);
  none.frozen.assign(none.frozen.size(), 0);
  CHECK_THROWS_AS(ground_state(cfg, none), std::invalid_argument);
  CHECK_THROWS_AS(
      ground_state(cfg, SpinField::uniform(make_window(5, 4), 1)),
      std::invalid_argument);

  // One frozen sign short-circuits to the uniform fill.
  SpinField single = SpinField::uniform(w, -1);
  single.frozen.assign(single.frozen.size(), 0);
  single.set(0, 0, -1, true);
  const GroundState gs = ground_state(cfg, single);
  CHECK(gs.energy.value == 0.0);
  for (const std::int8_t v : gs.field.values) CHECK(v == -1);
}

TEST_CASE("boundary builders freeze the advertised vertices") {
  const Window w = make_window(6, 5, 2, -1);
  const SpinField rows = boundary_rows(w);
  std::int64_t frozen_rows = 0;
  for (const std::uint8_t f : rows.frozen) frozen_rows += f ? 1 : 0;
  CHECK(frozen_rows == 2 * w.width);
  for (std::int64_t x = 2; x < 8; ++x) {
    CHECK(rows.at(x, 3) == 1);    // top row, largest y
    CHECK(rows.at(x, -1) == -1);  // bottom row
  }

  const SpinField halves = boundary_halves(w);
  std::int64_t frozen_ring = 0;
  for (const std::uint8_t f : halves.frozen) frozen_ring += f ? 1 : 0;
  CHECK(frozen_ring == 2 * w.width + 2 * w.height - 4);
  CHECK(halves.at(2, -1) == -1);
  CHECK(halves.at(2, 3) == 1);
  // Sign change at mid-height: 2*(y-origin) >= height flips to +1.
  CHECK(halves.at(2, 2) == 1);   // local y = 3, 2*3 >= 5
  CHECK(halves.at(2, 1) == -1);  // local y = 2, 2*2 < 5
}

TEST_CASE("rigidity probe hits the deterministic endpoints") {
  const RigidityReport zero = rigidity_probe(0.0, 8, 20, 5);
  CHECK(zero.fraction == 0.0);
  CHECK(zero.infinite_count == 0);
  const RigidityReport one = rigidity_probe(1.0, 8, 20, 5);
  CHECK(one.fraction == 1.0);
  CHECK(one.infinite_count == 20);
  CHECK_THROWS_AS(rigidity_probe(0.5, 4, 10, 1), std::invalid_argument);

  const RigidityReport a = rigidity_probe(0.5, 10, 40, 7, 1);
  const RigidityReport b = rigidity_probe(0.5, 10, 40, 7, 4);
  CHECK(a.infinite_count == b.infinite_count);
}

TEST_CASE("interface density matches the time constant on weak windows") {
  const InterfaceReport r = interface_vs_lambda(0.0, 16, 10, 3);
  CHECK(r.used == 10);
  CHECK(r.discarded == 0);
  CHECK(r.mean_density == 1.0);
  CHECK(r.density_se == 0.0);
  CHECK(r.min_density == 1.0);
  CHECK(r.lambda_mean == 17.0 / 16.0);
  CHECK(r.drift == 17.0 / 16.0 - 1.0);
  CHECK(r.within);
  CHECK_THROWS_AS(interface_vs_lambda(0.6, 16, 10, 3), std::invalid_argument);
}

TEST_CASE("interface density respects the cut lower bound per trial") {
  const InterfaceReport r = interface_vs_lambda(0.2, 24, 30, 11);
  CHECK(r.min_density >= (24.0 - 1.0) / 24.0);
  CHECK(r.used + r.discarded == r.trials);
}

TEST_CASE("spin grid and energy exports pin their formats") {
  const Window w = make_window(3, 2);
  SpinField u = SpinField::uniform(w, 1);
  u.set(1, 0, -1, false);
  u.set(2, 1, -1, false);
  CHECK(spin_grid(u) == "+-+\n++-\n");

  EnergyValue fin;
  fin.finite = true;
  fin.value = 3.0;
  fin.broken_weak = 3;
  CHECK(energy_json(fin) ==
        "{\"finite\": true, \"value\": 3, \"broken_weak\": 3, "
        "\"broken_strong\": 0}");
  EnergyValue inf;
  inf.finite = false;
  inf.value = std::numeric_limits<double>::infinity();
  inf.broken_weak = 2;
  inf.broken_strong = 1;
  CHECK(energy_json(inf) ==
        "{\"finite\": false, \"value\": \"inf\", \"broken_weak\": 2, "
        "\"broken_strong\": 1}");
}
