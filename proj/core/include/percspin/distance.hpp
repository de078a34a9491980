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

#ifndef PERCSPIN_DISTANCE_HPP
#define PERCSPIN_DISTANCE_HPP

#include <limits>
#include <optional>
#include <vector>

#include "percspin/clusters.hpp"
#include "percspin/lattice.hpp"

namespace percspin {

// Weight of a strong bond in the weighted passage time. Infinity is a
// distinguished marker: strong bonds become impassable, they never enter a
// sum as a float.
class Beta {
 public:
  static Beta finite(double value);
  static Beta infinite() { return Beta(true, 0.0); }

  bool is_infinite() const { return infinite_; }
  double value() const;

 private:
  Beta(bool infinite, double value) : infinite_(infinite), value_(value) {}
  bool infinite_;
  double value_;
};

struct PathResult {
  bool reachable = false;
  // Bond count (chemical) or total bond weight (passage); +inf when
  // unreachable.
  double value = std::numeric_limits<double>::infinity();
  std::vector<BondId> bond_path;    // chemical route, start to goal
  std::vector<Vertex> vertex_path;  // passage route, start to goal

  static PathResult unreachable_result() { return PathResult{}; }
};

// Minimal number of weak bonds on a weak path through both endpoints,
// counting bonds inclusively: the distance from a weak bond to itself is
// 1. Unreachable when either endpoint is strong or the endpoints lie in
// different weak clusters. Endpoints are global dual points and must be
// bond midpoints of the window.
PathResult chemical_distance(const BondConfig& cfg, DualPoint x, DualPoint y);

// Minimal total bond weight over lattice paths between two vertices, weak
// bonds weighing 1 and strong bonds weighing beta (>= 1); with infinite
// beta strong bonds are skipped entirely. Vertices are global coordinates.
PathResult passage_time(const BondConfig& cfg, Beta beta, Vertex x, Vertex y);

// Nearest bond midpoint (l1 metric, ties by lexicographic doubled
// coordinates) within radius of x that belongs to the designated crossing
// cluster (labels.left_right_crossing_id). Absent when that cluster does
// not exist or no member midpoint lies within radius.
std::optional<DualPoint> snap_to_cluster(const BondConfig& cfg,
                                         const ClusterLabels& labels,
                                         DualPoint x, std::int64_t radius);

}  // namespace percspin

#endif  // PERCSPIN_DISTANCE_HPP
