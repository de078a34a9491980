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

#include "percspin/clusters.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "percspin/io.hpp"
#include "parallel.hpp"
#include "union_find.hpp"

namespace percspin {

namespace {

using detail::UnionFind;

// Flat indices of the up-to-four bonds incident to local vertex (i,j),
// written into out; returns how many were stored.
int incident_weak_bonds(const BondConfig& cfg, int i, int j,
                        std::int64_t out[4]) {
  const Window& w = cfg.window();
  const std::int64_t h_count = w.horizontal_bond_count();
  int n = 0;
  if (i > 0) {
    const std::int64_t f = static_cast<std::int64_t>(j) * (w.width - 1) + i - 1;
    if (cfg.weak_flat(f)) out[n++] = f;
  }
  if (i < w.width - 1) {
    const std::int64_t f = static_cast<std::int64_t>(j) * (w.width - 1) + i;
    if (cfg.weak_flat(f)) out[n++] = f;
  }
  if (j > 0) {
    const std::int64_t f =
        h_count + static_cast<std::int64_t>(j - 1) * w.width + i;
    if (cfg.weak_flat(f)) out[n++] = f;
  }
  if (j < w.height - 1) {
    const std::int64_t f = h_count + static_cast<std::int64_t>(j) * w.width + i;
    if (cfg.weak_flat(f)) out[n++] = f;
  }
  return n;
}

}  // namespace

ClusterLabels weak_clusters(const BondConfig& cfg) {
  const Window& w = cfg.window();
  const std::int64_t bonds = w.bond_count();
  UnionFind uf(bonds);
  std::int64_t incident[4];
  for (int j = 0; j < w.height; ++j) {
    for (int i = 0; i < w.width; ++i) {
      const int n = incident_weak_bonds(cfg, i, j, incident);
      for (int k = 1; k < n; ++k) {
        uf.unite(static_cast<std::int32_t>(incident[0]),
                 static_cast<std::int32_t>(incident[k]));
      }
    }
  }

  ClusterLabels labels;
  labels.cluster_of.assign(static_cast<std::size_t>(bonds), -1);
  std::vector<std::int32_t> compact(static_cast<std::size_t>(bonds), -1);
  for (std::int64_t f = 0; f < bonds; ++f) {
    if (!cfg.weak_flat(f)) continue;
    const std::int32_t root = uf.find(static_cast<std::int32_t>(f));
    std::int32_t& id = compact[static_cast<std::size_t>(root)];
    if (id < 0) {
      id = static_cast<std::int32_t>(labels.sizes.size());
      labels.sizes.push_back(0);
    }
    labels.cluster_of[static_cast<std::size_t>(f)] = id;
    ++labels.sizes[static_cast<std::size_t>(id)];
  }
  for (std::size_t id = 0; id < labels.sizes.size(); ++id) {
    if (labels.largest_id < 0 ||
        labels.sizes[id] > labels.sizes[static_cast<std::size_t>(labels.largest_id)]) {
      labels.largest_id = static_cast<std::int32_t>(id);
    }
  }

  // Left/right edge contact per cluster, via bond endpoints.
  std::vector<unsigned char> touches_left(labels.sizes.size(), 0);
  std::vector<unsigned char> touches_right(labels.sizes.size(), 0);
  for (std::int64_t f = 0; f < bonds; ++f) {
    const std::int32_t id = labels.cluster_of[static_cast<std::size_t>(f)];
    if (id < 0) continue;
    const BondId b = bond_from_flat(w, f);
    const BondCell c = bond_cell(w, b);
    const int max_x =
        b.orientation == Orientation::kHorizontal ? c.i + 1 : c.i;
    if (c.i == 0) touches_left[static_cast<std::size_t>(id)] = 1;
    if (max_x == w.width - 1) touches_right[static_cast<std::size_t>(id)] = 1;
  }
  for (std::size_t id = 0; id < labels.sizes.size(); ++id) {
    if (!touches_left[id] || !touches_right[id]) continue;
    if (!labels.left_right_crossing_id ||
        labels.sizes[id] >
            labels.sizes[static_cast<std::size_t>(*labels.left_right_crossing_id)]) {
      labels.left_right_crossing_id = static_cast<std::int32_t>(id);
    }
  }
  return labels;
}

bool has_weak_crossing(const BondConfig& cfg, CrossDirection direction) {
  // Vertex components under weak bonds carry the same crossings as bond
  // clusters: consecutive bonds of a vertex path share the intermediate
  // vertex, and an edge-touching bond contributes an edge-column vertex.
  const Window& w = cfg.window();
  const std::int64_t h_count = w.horizontal_bond_count();
  UnionFind uf(w.vertex_count());
  const auto vid = [&w](int i, int j) {
    return static_cast<std::int32_t>(j * w.width + i);
  };
  for (int j = 0; j < w.height; ++j) {
    for (int i = 0; i < w.width - 1; ++i) {
      if (cfg.weak_flat(static_cast<std::int64_t>(j) * (w.width - 1) + i)) {
        uf.unite(vid(i, j), vid(i + 1, j));
      }
    }
  }
  for (int j = 0; j < w.height - 1; ++j) {
    for (int i = 0; i < w.width; ++i) {
      if (cfg.weak_flat(h_count + static_cast<std::int64_t>(j) * w.width + i)) {
        uf.unite(vid(i, j), vid(i, j + 1));
      }
    }
  }
  // A vertex with no incident weak bond cannot witness a crossing; demand
  // component size > 1 (a weak bond joins two vertices) on both edges.
  std::int64_t incident[4];
  const auto has_weak = [&](int i, int j) {
    return incident_weak_bonds(cfg, i, j, incident) > 0;
  };
  std::vector<unsigned char> near_root(static_cast<std::size_t>(w.vertex_count()), 0);
  if (direction == CrossDirection::kLeftRight) {
    for (int j = 0; j < w.height; ++j) {
      if (has_weak(0, j)) near_root[static_cast<std::size_t>(uf.find(vid(0, j)))] = 1;
    }
    for (int j = 0; j < w.height; ++j) {
      if (has_weak(w.width - 1, j) &&
          near_root[static_cast<std::size_t>(uf.find(vid(w.width - 1, j)))]) {
        return true;
      }
    }
    return false;
  }
  for (int i = 0; i < w.width; ++i) {
    if (has_weak(i, 0)) near_root[static_cast<std::size_t>(uf.find(vid(i, 0)))] = 1;
  }
  for (int i = 0; i < w.width; ++i) {
    if (has_weak(i, w.height - 1) &&
        near_root[static_cast<std::size_t>(uf.find(vid(i, w.height - 1)))]) {
      return true;
    }
  }
  return false;
}

std::vector<ScanRow> threshold_scan(const Window& window,
                                    const std::vector<double>& p_grid,
                                    std::int64_t trials, std::uint64_t seed,
                                    int jobs) {
  validate_window(window);
  if (p_grid.empty()) throw std::invalid_argument("p grid is empty");
  if (!std::is_sorted(p_grid.begin(), p_grid.end())) {
    throw std::invalid_argument("p grid must be sorted ascending");
  }
  if (p_grid.front() < 0.0 || p_grid.back() > 1.0) {
    throw std::invalid_argument("p grid must lie in [0,1]");
  }
  if (trials < 1) throw std::invalid_argument("trials must be positive");

  std::vector<ScanRow> rows;
  rows.reserve(p_grid.size());
  for (double p : p_grid) {
    struct TrialStat {
      double crossing;
      double fraction;
    };
    const auto stats = detail::ordered_parallel_map<TrialStat>(
        trials, jobs, [&](std::int64_t t) {
          const BondConfig cfg =
              sample_config(window, p, seed ^ static_cast<std::uint64_t>(t));
          const ClusterLabels labels = weak_clusters(cfg);
          std::int64_t weak_total = 0;
          for (std::int64_t s : labels.sizes) weak_total += s;
          double fraction = 0.0;
          if (labels.largest_id >= 0 && weak_total > 0) {
            fraction = static_cast<double>(
                           labels.sizes[static_cast<std::size_t>(labels.largest_id)]) /
                       static_cast<double>(weak_total);
          }
          const bool crossing =
              has_weak_crossing(cfg, CrossDirection::kLeftRight);
          return TrialStat{crossing ? 1.0 : 0.0, fraction};
        });

    ScanRow row;
    row.p = p;
    row.trials = trials;
    double sum_c = 0.0, sum_f = 0.0;
    for (const TrialStat& s : stats) {
      sum_c += s.crossing;
      sum_f += s.fraction;
    }
    row.crossing_freq = sum_c / static_cast<double>(trials);
    row.largest_fraction = sum_f / static_cast<double>(trials);
    row.crossing_se = std::sqrt(row.crossing_freq * (1.0 - row.crossing_freq) /
                                static_cast<double>(trials));
    double ss = 0.0;
    for (const TrialStat& s : stats) {
      const double d = s.fraction - row.largest_fraction;
      ss += d * d;
    }
    row.largest_fraction_se =
        trials > 1 ? std::sqrt(ss / static_cast<double>(trials - 1) /
                               static_cast<double>(trials))
                   : 0.0;
    rows.push_back(row);
  }
  return rows;
}

std::string scan_to_csv(const std::vector<ScanRow>& rows) {
  std::ostringstream out;
  out << "p,trials,crossing_freq,crossing_se,largest_fraction,"
         "largest_fraction_se\n";
  for (const ScanRow& r : rows) {
    out << format_number(r.p) << ',' << format_number(r.trials) << ','
        << format_number(r.crossing_freq) << ',' << format_number(r.crossing_se)
        << ',' << format_number(r.largest_fraction) << ','
        << format_number(r.largest_fraction_se) << '\n';
  }
  return out.str();
}

}  // namespace percspin
