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

#ifndef PERCSPIN_CHANNELS_HPP
#define PERCSPIN_CHANNELS_HPP

#include <cstdint>
#include <optional>
#include <vector>

#include "percspin/clusters.hpp"
#include "percspin/lattice.hpp"

namespace percspin {

// Scaled tube: the closed rectangle of side `scale` along the axis
// perpendicular to nu and side scale*delta along nu, anchored so that the
// axial coordinate <y - scale*center, perp(nu)> runs over [0, scale] with
// perp(nu) = (-nu_y, nu_x). Directions are rational: nu is given as an
// integer vector and normalized internally.
struct RectangleSpec {
  double center_x = 0.0;
  double center_y = 0.0;
  std::int64_t nu_int_x = 0;  // integer direction, normalized on use
  std::int64_t nu_int_y = 1;
  double delta = 1.0;
  double scale = 4.0;  // N

  double nu_x() const;  // unit vector components
  double nu_y() const;

  // Throws std::invalid_argument unless delta in (0,1], scale >= 4 and the
  // integer direction is nonzero.
  static RectangleSpec make(double center_x, double center_y,
                            std::int64_t nu_int_x, std::int64_t nu_int_y,
                            double delta, double scale);

  // Lateral/axial coordinates of a point (real coordinates), scaled by
  // |nu| so half-integer inputs stay exact in doubles. A point is inside
  // when |lateral| <= scale*delta/2*|nu| and axial in [0, scale*|nu|].
  double lateral(double x, double y) const;
  double axial(double x, double y) const;
  double norm() const;

  bool contains_midpoint(DualPoint midpoint) const;

  // Window that contains every bond whose midpoint can lie in the
  // rectangle, with one extra vertex of slack on each side.
  Window bounding_window() const;
};

struct ChannelReport {
  std::int64_t count = 0;       // maximal number of bond-disjoint channels
  std::int64_t max_length = 0;  // bonds in the longest channel of a family
  double normalized = 0.0;      // count / (scale * delta)
  double length_ratio = 0.0;    // max_length / scale
};

// Maximal family of bond-disjoint weak channels joining the two short
// sides of the rectangle, computed as a unit-node-capacity max flow. The
// family realizing the count comes from a shortest-augmenting-path flow
// decomposition. When certify is true (automatic for scale <= 32) the
// Menger certificate is asserted: family size == flow value == minimal
// vertex cut found in the residual graph.
ChannelReport count_disjoint_channels(const BondConfig& cfg,
                                      const RectangleSpec& rect);

// Same count over strong bonds, with adjacency through shared endpoints
// of the dual segments (the shifted lattice), i.e. two strong bonds are
// adjacent when their crossing dual segments share an endpoint.
ChannelReport count_strong_dual_channels(const BondConfig& cfg,
                                         const RectangleSpec& rect);

// True when a path of strong bonds, adjacent through shared dual-segment
// endpoints, joins the two opposite sides of the window (the dual segment
// endpoints reach past the first and last row or column).
bool has_strong_dual_crossing(const BondConfig& cfg, CrossDirection direction);

// Minimal number of strong bonds over all (mixed weak/strong) channels
// joining the short sides with at most length_budget bonds in total.
// Absent when no channel fits the budget. Two-criteria label-setting
// search: cost = strong bonds, resource = total bonds.
std::optional<std::int64_t> strong_link_percentage(const BondConfig& cfg,
                                                   const RectangleSpec& rect,
                                                   std::int64_t length_budget);

struct ChannelCsvRow {
  double p = 0.0;
  double scale = 0.0;
  double delta = 0.0;
  double nu_x = 0.0;
  double nu_y = 0.0;
  std::uint64_t seed = 0;
  ChannelReport report;
};

// CSV with header p,N,delta,nu_x,nu_y,seed,count,normalized,max_length,
// length_ratio.
std::string channels_to_csv(const std::vector<ChannelCsvRow>& rows);

}  // namespace percspin

#endif  // PERCSPIN_CHANNELS_HPP
