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

#ifndef PERCSPIN_SPIN_HPP
#define PERCSPIN_SPIN_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "percspin/lattice.hpp"

namespace percspin {

// +-1 spins on the vertices of a window. frozen marks boundary-conditioned
// vertices that solvers must not modify; eps is the lattice spacing that
// scales finite energies.
struct SpinField {
  Window window;
  std::vector<std::int8_t> values;    // +1 / -1, row-major by local (x,y)
  std::vector<std::uint8_t> frozen;   // nonzero = held fixed
  double eps = 1.0;

  static SpinField uniform(const Window& window, int sign, double eps = 1.0);

  std::int64_t index(std::int64_t gx, std::int64_t gy) const;
  std::int8_t at(std::int64_t gx, std::int64_t gy) const;
  void set(std::int64_t gx, std::int64_t gy, int sign, bool freeze);
};

// Energy of a spin field: eps per broken weak bond, infinite as soon as a
// strong bond is broken. finite <=> broken_strong == 0.
struct EnergyValue {
  bool finite = true;
  double value = 0.0;  // eps * broken_weak, or +inf
  std::int64_t broken_weak = 0;
  std::int64_t broken_strong = 0;
};

// Counts broken bonds of u under cfg. Throws std::invalid_argument when
// the field's window differs from the configuration's.
EnergyValue energy(const BondConfig& cfg, const SpinField& u);

struct GroundState {
  SpinField field;
  EnergyValue energy;
};

// Minimizes the energy over the unfrozen vertices of bc. The minimizer is
// a minimum s-t cut between the frozen +1 and frozen -1 sets with unit
// capacity on weak bonds; strong bonds are impassable, so the result is
// infinite exactly when some strong component carries both frozen signs.
// Infinite instances still minimize (broken_strong, broken_weak)
// lexicographically. Ties among minimizers: the cut hugging the side whose
// frozen set contains the lowest-index vertex, so negating every frozen
// sign negates the solution exactly. Throws std::invalid_argument on
// window mismatch or an empty frozen set; a single frozen sign yields the
// uniform field.
GroundState ground_state(const BondConfig& cfg, const SpinField& bc);

// Full top row frozen +1, full bottom row frozen -1 (top = largest y).
SpinField boundary_rows(const Window& window, double eps = 1.0);

// Boundary ring frozen: +1 on the upper half (2*(y - origin_y) >= height),
// -1 below, so the sign change sits at mid-height on both side columns.
SpinField boundary_halves(const Window& window, double eps = 1.0);

struct RigidityReport {
  double p = 0.0;
  int n = 0;
  std::int64_t trials = 0;
  std::int64_t infinite_count = 0;
  double fraction = 0.0;
};

// Frequency of infinite ground-state energy for boundary_halves data on an
// n x n window (n >= 8). Trial t uses seed ^ t.
RigidityReport rigidity_probe(double p, int n, std::int64_t trials,
                              std::uint64_t seed, int jobs = 1);

struct InterfaceReport {
  double p = 0.0;
  int n = 0;
  std::int64_t trials = 0;
  std::int64_t used = 0;
  std::int64_t discarded = 0;  // trials with infinite energy
  double mean_density = 0.0;   // mean broken_weak / n
  double density_se = 0.0;
  double min_density = 0.0;
  double lambda_mean = 0.0;
  double lambda_se = 0.0;
  double drift = 0.0;  // |mean_density - lambda_mean|
  double bound = 0.0;  // 3 * combined SE + 8/n
  bool within = false;
};

// Compares the boundary_halves ground-state interface density on n x n
// windows against the chemical-distance time constant along e1 at scale n,
// estimated with the same trial count and seed. Requires p < 1/2.
InterfaceReport interface_vs_lambda(double p, int n, std::int64_t trials,
                                    std::uint64_t seed, int jobs = 1);

// Text grid of '+'/'-' characters; the first line is row y = origin_y.
std::string spin_grid(const SpinField& field);

// {"finite": ..., "value": ..., "broken_weak": ..., "broken_strong": ...}
// with "inf" (quoted) as the infinite value.
std::string energy_json(const EnergyValue& energy);

}  // namespace percspin

#endif  // PERCSPIN_SPIN_HPP
