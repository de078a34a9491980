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

#ifndef PERCSPIN_LATTICE_HPP
#define PERCSPIN_LATTICE_HPP

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace percspin {

// Rectangular window of the square lattice. width/height count vertices,
// so the window holds (width-1)*height horizontal and width*(height-1)
// vertical bonds. origin is the global coordinate of local vertex (0,0).
struct Window {
  int width = 0;
  int height = 0;
  std::int64_t origin_x = 0;
  std::int64_t origin_y = 0;

  std::int64_t vertex_count() const {
    return static_cast<std::int64_t>(width) * height;
  }
  std::int64_t horizontal_bond_count() const {
    return static_cast<std::int64_t>(width - 1) * height;
  }
  std::int64_t vertical_bond_count() const {
    return static_cast<std::int64_t>(width) * (height - 1);
  }
  std::int64_t bond_count() const {
    return horizontal_bond_count() + vertical_bond_count();
  }
  bool contains_vertex(std::int64_t gx, std::int64_t gy) const {
    return gx >= origin_x && gx < origin_x + width && gy >= origin_y &&
           gy < origin_y + height;
  }
  friend bool operator==(const Window&, const Window&) = default;
};

// Throws std::invalid_argument unless width >= 2 and height >= 2.
void validate_window(const Window& window);

enum class Orientation : unsigned char { kHorizontal, kVertical };

// A bond inside a window. Horizontal bond (i,j)-(i+1,j) has index
// j*(width-1)+i, vertical bond (i,j)-(i,j+1) has index j*width+i; both
// row-major in the local cell coordinate (i,j).
struct BondId {
  Orientation orientation = Orientation::kHorizontal;
  std::int64_t index = 0;

  friend bool operator==(const BondId&, const BondId&) = default;
};

// Lattice vertex in global coordinates.
struct Vertex {
  std::int64_t x = 0;
  std::int64_t y = 0;
  friend bool operator==(const Vertex&, const Vertex&) = default;
};

// Point of the dual lattice (a bond midpoint), kept exact by storing
// doubled coordinates: the midpoint of (0,0)-(1,0) is {1,0} i.e. (0.5,0).
struct DualPoint {
  std::int64_t x2 = 0;
  std::int64_t y2 = 0;
  friend bool operator==(const DualPoint&, const DualPoint&) = default;
};

// Local cell coordinate of a bond: horizontal bonds join (i,j)-(i+1,j),
// vertical bonds join (i,j)-(i,j+1).
struct BondCell {
  int i = 0;
  int j = 0;
};

BondCell bond_cell(const Window& window, BondId bond);
BondId horizontal_bond(const Window& window, int i, int j);
BondId vertical_bond(const Window& window, int i, int j);

// Flat bond numbering used by packed label storage and cluster labels:
// horizontal bonds first (row-major), then vertical bonds (row-major).
std::int64_t flat_index(const Window& window, BondId bond);
BondId bond_from_flat(const Window& window, std::int64_t flat);

// Endpoints in global coordinates; first is the smaller one.
std::pair<Vertex, Vertex> bond_endpoints(const Window& window, BondId bond);

// Exact midpoint of the bond in global doubled coordinates.
DualPoint dual_midpoint(const Window& window, BondId bond);

// Inverse of dual_midpoint. Throws std::invalid_argument if the point is
// not a bond midpoint and std::out_of_range if it lies outside the window.
BondId nearest_bond(const Window& window, DualPoint point);

// Immutable sampled bond configuration. Each bond is independently strong
// with probability p. The label of a bond depends only on (seed, bond
// orientation, global bond cell), so enlarging or shifting the window
// around a fixed global bond never changes its label, and configurations
// sampled at p' >= p have weak bond sets contained in those sampled at p.
class BondConfig {
 public:
  static BondConfig sample(const Window& window, double p, std::uint64_t seed);
  // Wraps externally produced labels (tests, deserialization). strong_flags
  // is indexed by flat bond index.
  static BondConfig with_labels(const Window& window, double p,
                                std::uint64_t seed,
                                const std::vector<bool>& strong_flags);

  const Window& window() const { return window_; }
  double p() const { return p_; }
  std::uint64_t seed() const { return seed_; }

  bool strong_flat(std::int64_t flat) const {
    return (bits_[static_cast<std::size_t>(flat >> 6)] >> (flat & 63)) & 1u;
  }
  bool strong(BondId bond) const {
    return strong_flat(flat_index(window_, bond));
  }
  bool weak(BondId bond) const { return !strong(bond); }
  bool weak_flat(std::int64_t flat) const { return !strong_flat(flat); }

  std::int64_t strong_count() const;

  // Text format: header "W H origin_x origin_y p seed" followed by the
  // label bitset in hex, horizontal bonds first, row-major, bit=1 strong.
  std::string serialize() const;
  static BondConfig deserialize(std::string_view text);

 private:
  BondConfig(const Window& window, double p, std::uint64_t seed);

  Window window_;
  double p_ = 0.0;
  std::uint64_t seed_ = 0;
  std::vector<std::uint64_t> bits_;
};

BondConfig sample_config(const Window& window, double p, std::uint64_t seed);

// Two bonds are adjacent when they share a lattice endpoint and both are
// weak in cfg.
bool adjacent_weak(const BondConfig& cfg, BondId a, BondId b);

// The up-to-six bonds sharing an endpoint with `bond`, window-clipped.
std::vector<BondId> bond_neighbors(const Window& window, BondId bond);

// Uniform in [0,1) from a counter-based generator; the label of a bond is
// strong iff bond_uniform(...) < p. Exposed for reuse by the samplers.
double bond_uniform(std::uint64_t seed, Orientation orientation,
                    std::int64_t global_x, std::int64_t global_y);

std::uint64_t splitmix64(std::uint64_t z);

}  // namespace percspin

#endif  // PERCSPIN_LATTICE_HPP
