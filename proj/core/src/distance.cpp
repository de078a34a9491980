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

#include "percspin/distance.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <deque>
#include <queue>
#include <stdexcept>

namespace percspin {

Beta Beta::finite(double value) {
  if (!(value >= 1.0) || std::isinf(value)) {
    throw std::invalid_argument("finite beta must satisfy beta >= 1");
  }
  return Beta(false, value);
}

double Beta::value() const {
  if (infinite_) throw std::logic_error("infinite beta has no numeric value");
  return value_;
}

namespace {

// Up-to-six weak neighbors of a weak bond, as flat indices.
int weak_bond_neighbors(const BondConfig& cfg, std::int64_t flat,
                        std::int64_t out[6]) {
  const Window& w = cfg.window();
  const std::int64_t h_count = w.horizontal_bond_count();
  const bool horizontal = flat < h_count;
  const std::int64_t idx = horizontal ? flat : flat - h_count;
  const std::int64_t row_len = horizontal ? w.width - 1 : w.width;
  const int i = static_cast<int>(idx % row_len);
  const int j = static_cast<int>(idx / row_len);
  int n = 0;
  const auto push_h = [&](int hi, int hj) {
    if (hi < 0 || hi >= w.width - 1 || hj < 0 || hj >= w.height) return;
    const std::int64_t f = static_cast<std::int64_t>(hj) * (w.width - 1) + hi;
    if (f != flat && cfg.weak_flat(f)) out[n++] = f;
  };
  const auto push_v = [&](int vi, int vj) {
    if (vi < 0 || vi >= w.width || vj < 0 || vj >= w.height - 1) return;
    const std::int64_t f =
        h_count + static_cast<std::int64_t>(vj) * w.width + vi;
    if (f != flat && cfg.weak_flat(f)) out[n++] = f;
  };
  if (horizontal) {
    // Endpoints (i,j) and (i+1,j).
    push_h(i - 1, j);
    push_h(i + 1, j);
    push_v(i, j);
    push_v(i, j - 1);
    push_v(i + 1, j);
    push_v(i + 1, j - 1);
  } else {
    // Endpoints (i,j) and (i,j+1).
    push_v(i, j - 1);
    push_v(i, j + 1);
    push_h(i - 1, j);
    push_h(i, j);
    push_h(i - 1, j + 1);
    push_h(i, j + 1);
  }
  return n;
}

}  // namespace

PathResult chemical_distance(const BondConfig& cfg, DualPoint x, DualPoint y) {
  const Window& w = cfg.window();
  const BondId bx = nearest_bond(w, x);
  const BondId by = nearest_bond(w, y);
  if (cfg.strong(bx) || cfg.strong(by)) return PathResult::unreachable_result();

  const std::int64_t start = flat_index(w, bx);
  const std::int64_t goal = flat_index(w, by);
  std::vector<std::int64_t> dist(static_cast<std::size_t>(w.bond_count()), -1);
  std::vector<std::int64_t> prev(static_cast<std::size_t>(w.bond_count()), -1);
  std::deque<std::int64_t> queue;
  dist[static_cast<std::size_t>(start)] = 1;  // bond-inclusive count
  queue.push_back(start);
  while (!queue.empty()) {
    const std::int64_t cur = queue.front();
    queue.pop_front();
    if (cur == goal) break;
    std::int64_t nbr[6];
    const int n = weak_bond_neighbors(cfg, cur, nbr);
    for (int k = 0; k < n; ++k) {
      if (dist[static_cast<std::size_t>(nbr[k])] >= 0) continue;
      dist[static_cast<std::size_t>(nbr[k])] =
          dist[static_cast<std::size_t>(cur)] + 1;
      prev[static_cast<std::size_t>(nbr[k])] = cur;
      queue.push_back(nbr[k]);
    }
  }
  if (dist[static_cast<std::size_t>(goal)] < 0) {
    return PathResult::unreachable_result();
  }
  PathResult res;
  res.reachable = true;
  res.value = static_cast<double>(dist[static_cast<std::size_t>(goal)]);
  for (std::int64_t b = goal; b >= 0; b = prev[static_cast<std::size_t>(b)]) {
    res.bond_path.push_back(bond_from_flat(w, b));
    if (b == start) break;
  }
  std::reverse(res.bond_path.begin(), res.bond_path.end());
  return res;
}

PathResult passage_time(const BondConfig& cfg, Beta beta, Vertex x, Vertex y) {
  const Window& w = cfg.window();
  if (!w.contains_vertex(x.x, x.y) || !w.contains_vertex(y.x, y.y)) {
    throw std::out_of_range("passage endpoints must lie inside the window");
  }
  const std::int64_t vcount = w.vertex_count();
  const auto vid = [&w](std::int64_t i, std::int64_t j) {
    return j * w.width + i;
  };
  const std::int64_t start = vid(x.x - w.origin_x, x.y - w.origin_y);
  const std::int64_t goal = vid(y.x - w.origin_x, y.y - w.origin_y);
  constexpr double kInf = std::numeric_limits<double>::infinity();
  std::vector<double> dist(static_cast<std::size_t>(vcount), kInf);
  std::vector<std::int64_t> prev(static_cast<std::size_t>(vcount), -1);
  using Item = std::pair<double, std::int64_t>;
  std::priority_queue<Item, std::vector<Item>, std::greater<Item>> heap;
  dist[static_cast<std::size_t>(start)] = 0.0;
  heap.emplace(0.0, start);
  const std::int64_t h_count = w.horizontal_bond_count();
  while (!heap.empty()) {
    const auto [d, v] = heap.top();
    heap.pop();
    if (d > dist[static_cast<std::size_t>(v)]) continue;
    if (v == goal) break;
    const std::int64_t i = v % w.width;
    const std::int64_t j = v / w.width;
    const auto relax = [&](std::int64_t flat, std::int64_t to) {
      double weight = 1.0;
      if (cfg.strong_flat(flat)) {
        if (beta.is_infinite()) return;
        weight = beta.value();
      }
      const double nd = d + weight;
      if (nd < dist[static_cast<std::size_t>(to)]) {
        dist[static_cast<std::size_t>(to)] = nd;
        prev[static_cast<std::size_t>(to)] = v;
        heap.emplace(nd, to);
      }
    };
    if (i > 0) relax(j * (w.width - 1) + i - 1, v - 1);
    if (i < w.width - 1) relax(j * (w.width - 1) + i, v + 1);
    if (j > 0) relax(h_count + (j - 1) * w.width + i, v - w.width);
    if (j < w.height - 1) relax(h_count + j * w.width + i, v + w.width);
  }
  if (dist[static_cast<std::size_t>(goal)] == kInf) {
    return PathResult::unreachable_result();
  }
  PathResult res;
  res.reachable = true;
  res.value = dist[static_cast<std::size_t>(goal)];
  for (std::int64_t v = goal; v >= 0; v = prev[static_cast<std::size_t>(v)]) {
    res.vertex_path.push_back(
        Vertex{w.origin_x + v % w.width, w.origin_y + v / w.width});
    if (v == start) break;
  }
  std::reverse(res.vertex_path.begin(), res.vertex_path.end());
  return res;
}

std::optional<DualPoint> snap_to_cluster(const BondConfig& cfg,
                                         const ClusterLabels& labels,
                                         DualPoint x, std::int64_t radius) {
  if (radius < 0) throw std::invalid_argument("radius must be nonnegative");
  if (!labels.left_right_crossing_id) return std::nullopt;
  const std::int32_t target = *labels.left_right_crossing_id;
  const Window& w = cfg.window();
  const std::int64_t r2 = 2 * radius;  // doubled-coordinate budget

  bool found = false;
  std::int64_t best_dist = 0;
  DualPoint best{};
  const auto consider = (
      [&](std::int64_t flat, std::int64_t mx2, std::int64_t my2) {
        if (labels.cluster_of[static_cast<std::size_t>(flat)] != target) return;
        const std::int64_t d = std::llabs(mx2 - x.x2) + std::llabs(my2 - x.y2);
        if (d > r2) return;
        const bool better =
            !found || d < best_dist ||
            (d == best_dist &&
             (mx2 < best.x2 || (mx2 == best.x2 && my2 < best.y2)));
        if (better) {
          found = true;
          best_dist = d;
          best = DualPoint{mx2, my2};
        }
      });

  // Horizontal midpoints are (2i+1, 2j) + doubled origin.
  const std::int64_t ox2 = 2 * w.origin_x;
  const std::int64_t oy2 = 2 * w.origin_y;
  {
    const std::int64_t ilo = std::max<std::int64_t>(0, (x.x2 - r2 - ox2 - 1) / 2 - 1);
    const std::int64_t ihi = std::min<std::int64_t>(w.width - 2, (x.x2 + r2 - ox2 - 1) / 2 + 1);
    const std::int64_t jlo = std::max<std::int64_t>(0, (x.y2 - r2 - oy2) / 2 - 1);
    const std::int64_t jhi = std::min<std::int64_t>(w.height - 1, (x.y2 + r2 - oy2) / 2 + 1);
    for (std::int64_t j = jlo; j <= jhi; ++j) {
      for (std::int64_t i = ilo; i <= ihi; ++i) {
        consider(j * (w.width - 1) + i, ox2 + 2 * i + 1, oy2 + 2 * j);
      }
    }
  }
  {
    const std::int64_t h_count = w.horizontal_bond_count();
    const std::int64_t ilo = std::max<std::int64_t>(0, (x.x2 - r2 - ox2) / 2 - 1);
    const std::int64_t ihi = std::min<std::int64_t>(w.width - 1, (x.x2 + r2 - ox2) / 2 + 1);
    const std::int64_t jlo = std::max<std::int64_t>(0, (x.y2 - r2 - oy2 - 1) / 2 - 1);
    const std::int64_t jhi = std::min<std::int64_t>(w.height - 2, (x.y2 + r2 - oy2 - 1) / 2 + 1);
    for (std::int64_t j = jlo; j <= jhi; ++j) {
      for (std::int64_t i = ilo; i <= ihi; ++i) {
        consider(h_count + j * w.width + i, ox2 + 2 * i, oy2 + 2 * j + 1);
      }
    }
  }
  if (!found) return std::nullopt;
  return best;
}

}  // namespace percspin
