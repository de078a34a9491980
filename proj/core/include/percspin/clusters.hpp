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

#ifndef PERCSPIN_CLUSTERS_HPP
#define PERCSPIN_CLUSTERS_HPP

#include <cstdint>
#include <optional>
#include <vector>

#include "percspin/lattice.hpp"

namespace percspin {

// Connected components of the weak bond graph (bonds joined when they
// share a lattice endpoint). Ids are consecutive from 0 in order of first
// appearance along the flat bond numbering; strong bonds carry -1.
struct ClusterLabels {
  std::vector<std::int32_t> cluster_of;  // per flat bond, -1 for strong
  std::vector<std::int64_t> sizes;       // bonds per cluster id
  std::int32_t largest_id = -1;          // -1 when there are no weak bonds
  // Largest cluster holding a bond with an endpoint in the leftmost column
  // and one with an endpoint in the rightmost column; ties to smaller id.
  std::optional<std::int32_t> left_right_crossing_id;
};

ClusterLabels weak_clusters(const BondConfig& cfg);

enum class CrossDirection { kLeftRight, kBottomTop };

// True when one weak cluster touches both opposite window edges; edges are
// touched through bond endpoints, not midpoints.
bool has_weak_crossing(const BondConfig& cfg, CrossDirection direction);

struct ScanRow {
  double p = 0.0;
  std::int64_t trials = 0;
  double crossing_freq = 0.0;
  double crossing_se = 0.0;
  double largest_fraction = 0.0;
  double largest_fraction_se = 0.0;
};

// Monte Carlo scan over p_grid (sorted, within [0,1]). Trial t uses seed ^
// t, identically for every p, so the sampled configurations are coupled
// across the grid. crossing_freq counts left-right weak crossings;
// largest_fraction is the largest cluster's share of weak bonds (0 when
// the configuration has none).
std::vector<ScanRow> threshold_scan(const Window& window,
                                    const std::vector<double>& p_grid,
                                    std::int64_t trials, std::uint64_t seed,
                                    int jobs = 1);

// CSV with header p,trials,crossing_freq,crossing_se,largest_fraction,
// largest_fraction_se.
std::string scan_to_csv(const std::vector<ScanRow>& rows);

}  // namespace percspin

#endif  // PERCSPIN_CLUSTERS_HPP
