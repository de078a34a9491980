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

#include "percspin/channels.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <sstream>
#include <stdexcept>

#include "percspin/io.hpp"
#include "dinic.hpp"

namespace percspin {

double RectangleSpec::norm() const {
  return std::sqrt(static_cast<double>(nu_int_x * nu_int_x + nu_int_y * nu_int_y));
}

double RectangleSpec::nu_x() const { return static_cast<double>(nu_int_x) / norm(); }
double RectangleSpec::nu_y() const { return static_cast<double>(nu_int_y) / norm(); }

RectangleSpec RectangleSpec::make(double center_x, double center_y,
                                  std::int64_t nu_int_x, std::int64_t nu_int_y,
                                  double delta, double scale) {
  if (nu_int_x == 0 && nu_int_y == 0) {
    throw std::invalid_argument("direction must be a nonzero integer vector");
  }
  if (!(delta > 0.0 && delta <= 1.0)) {
    throw std::invalid_argument("delta must lie in (0,1]");
  }
  if (!(scale >= 4.0)) throw std::invalid_argument("scale must be at least 4");
  RectangleSpec rect;
  rect.center_x = center_x;
  rect.center_y = center_y;
  rect.nu_int_x = nu_int_x;
  rect.nu_int_y = nu_int_y;
  rect.delta = delta;
  rect.scale = scale;
  return rect;
}

double RectangleSpec::lateral(double x, double y) const {
  const double a = static_cast<double>(nu_int_x);
  const double b = static_cast<double>(nu_int_y);
  return a * x + b * y - scale * (a * center_x + b * center_y);
}

double RectangleSpec::axial(double x, double y) const {
  // perp(nu) = (-nu_y, nu_x)
  const double a = static_cast<double>(nu_int_x);
  const double b = static_cast<double>(nu_int_y);
  return -b * x + a * y - scale * (-b * center_x + a * center_y);
}

bool RectangleSpec::contains_midpoint(DualPoint midpoint) const {
  const double x = static_cast<double>(midpoint.x2) / 2.0;
  const double y = static_cast<double>(midpoint.y2) / 2.0;
  const double s = norm();
  const double lat = lateral(x, y);
  const double ax = axial(x, y);
  return std::abs(lat) <= scale * delta / 2.0 * s && ax >= 0.0 &&
         ax <= scale * s;
}

Window RectangleSpec::bounding_window() const {
  const double s = norm();
  const double ux = static_cast<double>(nu_int_x) / s;
  const double uy = static_cast<double>(nu_int_y) / s;
  const double px = -uy;
  const double py = ux;
  const double bx = scale * center_x;
  const double by = scale * center_y;
  double min_x = 0, max_x = 0, min_y = 0, max_y = 0;
  bool first = true;
  for (double axial_c : {0.0, scale}) {
    for (double lat_c : {-scale * delta / 2.0, scale * delta / 2.0}) {
      const double cx = bx + axial_c * px + lat_c * ux;
      const double cy = by + axial_c * py + lat_c * uy;
      if (first || cx < min_x) min_x = cx;
      if (first || cx > max_x) max_x = cx;
      if (first || cy < min_y) min_y = cy;
      if (first || cy > max_y) max_y = cy;
      first = false;
    }
  }
  Window w;
  w.origin_x = static_cast<std::int64_t>(std::floor(min_x)) - 2;
  w.origin_y = static_cast<std::int64_t>(std::floor(min_y)) - 2;
  w.width = static_cast<int>(static_cast<std::int64_t>(std::ceil(max_x)) + 2 -
                             w.origin_x + 1);
  w.height = static_cast<int>(static_cast<std::int64_t>(std::ceil(max_y)) + 2 -
                              w.origin_y + 1);
  return w;
}

namespace {

void require_margin(const Window& window, const RectangleSpec& rect) {
  const Window need = rect.bounding_window();
  if (need.origin_x < window.origin_x || need.origin_y < window.origin_y ||
      need.origin_x + need.width > window.origin_x + window.width ||
      need.origin_y + need.height > window.origin_y + window.height) {
    // The caller's window may be exactly the bounding window; only a
    // genuine overlap failure is an error. Re-check against the raw
    // rectangle extent plus margin one.
    Window tight = need;
    tight.origin_x += 1;
    tight.origin_y += 1;
    tight.width -= 2;
    tight.height -= 2;
    if (tight.origin_x < window.origin_x || tight.origin_y < window.origin_y ||
        tight.origin_x + tight.width > window.origin_x + window.width ||
        tight.origin_y + tight.height > window.origin_y + window.height) {
      throw std::invalid_argument(
          "window must contain the rectangle with margin at least 1");
    }
  }
}

struct SideTouch {
  bool source = false;  // axial reaches 0
  bool sink = false;    // axial reaches scale*|nu|
};

// Bonds of the window whose midpoint lies in the rectangle, with flags for
// touching the short sides through the segment used for adjacency:
// primal endpoints for weak channels, dual-segment endpoints for strong
// dual channels.
struct RectBonds {
  std::vector<std::int64_t> flats;        // member bonds, flat order
  std::vector<std::int32_t> node_of;      // per flat bond, -1 outside
  std::vector<SideTouch> touch;           // per member
};

RectBonds collect_rect_bonds(const BondConfig& cfg, const RectangleSpec& rect,
                             bool strong_side, bool dual_segments) {
  const Window& w = cfg.window();
  require_margin(w, rect);
  const double s = rect.norm();
  const double hi = rect.scale * s;
  RectBonds out;
  out.node_of.assign(static_cast<std::size_t>(w.bond_count()), -1);
  for (std::int64_t f = 0; f < w.bond_count(); ++f) {
    if (cfg.strong_flat(f) != strong_side) continue;
    const BondId b = bond_from_flat(w, f);
    const DualPoint mid = dual_midpoint(w, b);
    if (!rect.contains_midpoint(mid)) continue;
    const double mx = static_cast<double>(mid.x2) / 2.0;
    const double my = static_cast<double>(mid.y2) / 2.0;
    double e0x, e0y, e1x, e1y;
    const bool horizontal = b.orientation == Orientation::kHorizontal;
    if (dual_segments ? !horizontal : horizontal) {
      // Segment extends along x.
      e0x = mx - 0.5; e0y = my; e1x = mx + 0.5; e1y = my;
    } else {
      e0x = mx; e0y = my - 0.5; e1x = mx; e1y = my + 0.5;
    }
    const double a0 = rect.axial(e0x, e0y);
    const double a1 = rect.axial(e1x, e1y);
    SideTouch touch;
    touch.source = std::min(a0, a1) <= 0.0;
    touch.sink = std::max(a0, a1) >= hi;
    out.node_of[static_cast<std::size_t>(f)] =
        static_cast<std::int32_t>(out.flats.size());
    out.flats.push_back(f);
    out.touch.push_back(touch);
  }
  return out;
}

// Up-to-four flat bond indices whose dual segments meet the shifted-lattice
// point (i+1/2, j+1/2) in local cell coordinates; i in [-1,W-1], j in
// [-1,H-1]. Returns the number stored.
int dual_incident(const Window& w, int i, int j, std::int64_t out[4]) {
  const std::int64_t h_count = w.horizontal_bond_count();
  int n = 0;
  if (i >= 0 && i < w.width - 1 && j >= 0 && j < w.height) {
    out[n++] = static_cast<std::int64_t>(j) * (w.width - 1) + i;  // h(i,j)
  }
  if (i >= 0 && i < w.width - 1 && j + 1 >= 0 && j + 1 < w.height) {
    out[n++] = static_cast<std::int64_t>(j + 1) * (w.width - 1) + i;  // h(i,j+1)
  }
  if (i >= 0 && i < w.width && j >= 0 && j < w.height - 1) {
    out[n++] = h_count + static_cast<std::int64_t>(j) * w.width + i;  // v(i,j)
  }
  if (i + 1 >= 0 && i + 1 < w.width && j >= 0 && j < w.height - 1) {
    out[n++] = h_count + static_cast<std::int64_t>(j) * w.width + i + 1;  // v(i+1,j)
  }
  return n;
}

// The two shifted-lattice cells (i,j) whose point (i+1/2,j+1/2) ends the
// dual segment of flat bond f.
void dual_endpoint_cells(const Window& w, std::int64_t f, int cells[2][2]) {
  const std::int64_t h_count = w.horizontal_bond_count();
  if (f < h_count) {
    const int i = static_cast<int>(f % (w.width - 1));
    const int j = static_cast<int>(f / (w.width - 1));
    cells[0][0] = i; cells[0][1] = j - 1;  // (i+1/2, j-1/2)
    cells[1][0] = i; cells[1][1] = j;      // (i+1/2, j+1/2)
  } else {
    const std::int64_t idx = f - h_count;
    const int i = static_cast<int>(idx % w.width);
    const int j = static_cast<int>(idx / w.width);
    cells[0][0] = i - 1; cells[0][1] = j;  // (i-1/2, j+1/2)
    cells[1][0] = i; cells[1][1] = j;      // (i+1/2, j+1/2)
  }
}

std::vector<std::int64_t> neighbor_flats(const BondConfig& cfg,
                                         std::int64_t f, bool dual_adjacency) {
  const Window& w = cfg.window();
  std::vector<std::int64_t> out;
  out.reserve(6);
  if (!dual_adjacency) {
    for (const BondId& nb : bond_neighbors(w, bond_from_flat(w, f))) {
      out.push_back(flat_index(w, nb));
    }
    return out;
  }
  int cells[2][2];
  dual_endpoint_cells(w, f, cells);
  std::int64_t incident[4];
  for (int e = 0; e < 2; ++e) {
    const int n = dual_incident(w, cells[e][0], cells[e][1], incident);
    for (int k = 0; k < n; ++k) {
      if (incident[k] != f) out.push_back(incident[k]);
    }
  }
  return out;
}

ChannelReport count_channels_impl(const BondConfig& cfg,
                                  const RectangleSpec& rect, bool strong_side,
                                  bool dual_adjacency) {
  const RectBonds bonds =
      collect_rect_bonds(cfg, rect, strong_side, dual_adjacency);
  const std::int64_t n = static_cast<std::int64_t>(bonds.flats.size());
  ChannelReport report;
  if (n == 0) return report;

  // Node split: in(k)=2k, out(k)=2k+1; S=2n, T=2n+1. Only the split edges
  // carry finite capacity, so every minimal cut is a set of bonds and the
  // residual reachability yields a Menger vertex cut directly.
  detail::Dinic net(2 * n + 2);
  const std::int64_t s_node = 2 * n;
  const std::int64_t t_node = 2 * n + 1;
  const std::int64_t big = n + 1;
  for (std::int64_t k = 0; k < n; ++k) {
    net.add_edge(2 * k, 2 * k + 1, 1);
    if (bonds.touch[static_cast<std::size_t>(k)].source) {
      net.add_edge(s_node, 2 * k, big);
    }
    if (bonds.touch[static_cast<std::size_t>(k)].sink) {
      net.add_edge(2 * k + 1, t_node, big);
    }
  }
  for (std::int64_t k = 0; k < n; ++k) {
    for (std::int64_t nf :
         neighbor_flats(cfg, bonds.flats[static_cast<std::size_t>(k)],
                        dual_adjacency)) {
      const std::int32_t to = bonds.node_of[static_cast<std::size_t>(nf)];
      if (to >= 0) net.add_edge(2 * k + 1, 2 * to, big);
    }
  }

  const std::int64_t flow = net.max_flow(s_node, t_node);
  report.count = flow;
  report.normalized = static_cast<double>(flow) / (rect.scale * rect.delta);

  const bool certify = rect.scale <= 32.0;
  if (certify) {
    const std::vector<unsigned char> reach = net.source_side(s_node);
    std::int64_t cut = 0;
    for (std::int64_t k = 0; k < n; ++k) {
      if (reach[static_cast<std::size_t>(2 * k)] &&
          !reach[static_cast<std::size_t>(2 * k + 1)]) {
        ++cut;
      }
    }
    if (cut != flow) {
      throw std::logic_error("Menger certificate failed: cut != flow");
    }
  }

  // Decompose into bond-disjoint channels by walking net flow from S,
  // consuming it edge by edge. Unit split capacities make the walk
  // unambiguous: a node carrying flow has exactly one used outgoing edge,
  // and no decomposition cycle can touch a path node.
  auto& edges = const_cast<std::vector<detail::Dinic::Edge>&>(net.edges());
  const auto& head = net.head();
  const auto net_flow = [&edges](std::int64_t e) {
    return edges[static_cast<std::size_t>(e ^ 1)].cap;
  };
  std::int64_t paths = 0;
  std::vector<unsigned char> used_bond(static_cast<std::size_t>(n), 0);
  for (std::int64_t start = head[static_cast<std::size_t>(s_node)]; start >= 0;
       start = edges[static_cast<std::size_t>(start)].next) {
    while ((start & 1) == 0 && net_flow(start) >= 1) {
      std::int64_t path_bonds = 0;
      std::int64_t e = start;
      for (;;) {
        edges[static_cast<std::size_t>(e ^ 1)].cap -= 1;
        edges[static_cast<std::size_t>(e)].cap += 1;
        const std::int64_t v = edges[static_cast<std::size_t>(e)].to;
        if (v == t_node) break;
        if ((v & 1) == 0 && v < 2 * n) {
          // Entering in(k): the split edge follows, count the bond.
          const std::int64_t k = v / 2;
          if (used_bond[static_cast<std::size_t>(k)]) {
            throw std::logic_error("channel decomposition reused a bond");
          }
          used_bond[static_cast<std::size_t>(k)] = 1;
          ++path_bonds;
        }
        std::int64_t next_e = -1;
        for (std::int64_t cand = head[static_cast<std::size_t>(v)]; cand >= 0;
             cand = edges[static_cast<std::size_t>(cand)].next) {
          if ((cand & 1) == 0 && net_flow(cand) >= 1) {
            next_e = cand;
            break;
          }
        }
        if (next_e < 0) throw std::logic_error("flow walk lost conservation");
        e = next_e;
      }
      ++paths;
      report.max_length = std::max(report.max_length, path_bonds);
    }
  }
  if (paths != flow) {
    throw std::logic_error("flow decomposition path count mismatch");
  }
  report.length_ratio = static_cast<double>(report.max_length) / rect.scale;
  return report;
}

}  // namespace

ChannelReport count_disjoint_channels(const BondConfig& cfg,
                                      const RectangleSpec& rect) {
  return count_channels_impl(cfg, rect, /*strong_side=*/false,
                             /*dual_adjacency=*/false);
}

ChannelReport count_strong_dual_channels(const BondConfig& cfg,
                                         const RectangleSpec& rect) {
  return count_channels_impl(cfg, rect, /*strong_side=*/true,
                             /*dual_adjacency=*/true);
}

bool has_strong_dual_crossing(const BondConfig& cfg,
                              CrossDirection direction) {
  const Window& w = cfg.window();
  const std::int64_t bonds = w.bond_count();
  // Union through shared dual-segment endpoints: group the strong bonds
  // around every shifted-lattice point.
  std::vector<std::int32_t> parent(static_cast<std::size_t>(bonds));
  for (std::int64_t f = 0; f < bonds; ++f) {
    parent[static_cast<std::size_t>(f)] = static_cast<std::int32_t>(f);
  }
  const auto find = [&parent](std::int32_t a) {
    while (parent[static_cast<std::size_t>(a)] != a) {
      parent[static_cast<std::size_t>(a)] =
          parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(a)])];
      a = parent[static_cast<std::size_t>(a)];
    }
    return a;
  };
  const auto unite = [&](std::int32_t a, std::int32_t b) {
    a = find(a);
    b = find(b);
    if (a != b) parent[static_cast<std::size_t>(b)] = a;
  };
  std::int64_t incident[4];
  for (int j = -1; j < w.height; ++j) {
    for (int i = -1; i < w.width; ++i) {
      const int n = dual_incident(w, i, j, incident);
      std::int32_t first = -1;
      for (int k = 0; k < n; ++k) {
        if (!cfg.strong_flat(incident[k])) continue;
        if (first < 0) {
          first = static_cast<std::int32_t>(incident[k]);
        } else {
          unite(first, static_cast<std::int32_t>(incident[k]));
        }
      }
    }
  }
  // Horizontal bonds in the first/last row reach below/above the window
  // (dual endpoints at y = -1/2 and y = H-1/2); vertical bonds in the
  // first/last column reach sideways.
  std::vector<unsigned char> near_root(static_cast<std::size_t>(bonds), 0);
  const std::int64_t h_count = w.horizontal_bond_count();
  if (direction == CrossDirection::kBottomTop) {
    for (int i = 0; i < w.width - 1; ++i) {
      const std::int64_t f = i;  // h(i,0)
      if (cfg.strong_flat(f)) near_root[static_cast<std::size_t>(find(static_cast<std::int32_t>(f)))] = 1;
    }
    for (int i = 0; i < w.width - 1; ++i) {
      const std::int64_t f =
          static_cast<std::int64_t>(w.height - 1) * (w.width - 1) + i;
      if (cfg.strong_flat(f) &&
          near_root[static_cast<std::size_t>(find(static_cast<std::int32_t>(f)))]) {
        return true;
      }
    }
    return false;
  }
  for (int j = 0; j < w.height - 1; ++j) {
    const std::int64_t f = h_count + static_cast<std::int64_t>(j) * w.width;
    if (cfg.strong_flat(f)) near_root[static_cast<std::size_t>(find(static_cast<std::int32_t>(f)))] = 1;
  }
  for (int j = 0; j < w.height - 1; ++j) {
    const std::int64_t f =
        h_count + static_cast<std::int64_t>(j) * w.width + w.width - 1;
    if (cfg.strong_flat(f) &&
        near_root[static_cast<std::size_t>(find(static_cast<std::int32_t>(f)))]) {
      return true;
    }
  }
  return false;
}

std::optional<std::int64_t> strong_link_percentage(const BondConfig& cfg,
                                                   const RectangleSpec& rect,
                                                   std::int64_t length_budget) {
  if (length_budget < 1) {
    throw std::invalid_argument("length budget must be positive");
  }
  const Window& w = cfg.window();
  require_margin(w, rect);
  const double s = rect.norm();
  const double hi = rect.scale * s;

  // Member bonds of both labels, with primal-segment touch flags.
  std::vector<std::int32_t> node_of(static_cast<std::size_t>(w.bond_count()), -1);
  std::vector<std::int64_t> flats;
  std::vector<unsigned char> is_sink;
  std::vector<unsigned char> is_source;
  std::vector<unsigned char> strong;
  for (std::int64_t f = 0; f < w.bond_count(); ++f) {
    const BondId b = bond_from_flat(w, f);
    const DualPoint mid = dual_midpoint(w, b);
    if (!rect.contains_midpoint(mid)) continue;
    const auto [e0, e1] = bond_endpoints(w, b);
    const double a0 = rect.axial(static_cast<double>(e0.x), static_cast<double>(e0.y));
    const double a1 = rect.axial(static_cast<double>(e1.x), static_cast<double>(e1.y));
    node_of[static_cast<std::size_t>(f)] = static_cast<std::int32_t>(flats.size());
    flats.push_back(f);
    is_source.push_back(std::min(a0, a1) <= 0.0 ? 1 : 0);
    is_sink.push_back(std::max(a0, a1) >= hi ? 1 : 0);
    strong.push_back(cfg.strong_flat(f) ? 1 : 0);
  }
  const std::int64_t n = static_cast<std::int64_t>(flats.size());
  if (n == 0) return std::nullopt;

  // Label-setting over (cost, length) in lexicographic order. Per node we
  // keep the Pareto frontier: accepted labels arrive with increasing cost
  // and strictly decreasing length.
  struct Label {
    std::int64_t cost;
    std::int64_t len;
    std::int32_t node;
  };
  const auto cmp = [](const Label& a, const Label& b) {
    if (a.cost != b.cost) return a.cost > b.cost;
    return a.len > b.len;
  };
  std::priority_queue<Label, std::vector<Label>, decltype(cmp)> heap(cmp);
  std::vector<std::vector<std::pair<std::int64_t, std::int64_t>>> pareto(
      static_cast<std::size_t>(n));
  const auto dominated = [&pareto](std::int32_t node, std::int64_t cost,
                                   std::int64_t len) {
    const auto& fr = pareto[static_cast<std::size_t>(node)];
    // Frontier is sorted by cost ascending with lengths strictly
    // decreasing; the best length among entries with cost' <= cost is the
    // last such entry's.
    auto it = std::upper_bound(
        fr.begin(), fr.end(), cost,
        [](std::int64_t c, const std::pair<std::int64_t, std::int64_t>& e) {
          return c < e.first;
        });
    if (it == fr.begin()) return false;
    return std::prev(it)->second <= len;
  };
  for (std::int32_t k = 0; k < n; ++k) {
    if (!is_source[static_cast<std::size_t>(k)]) continue;
    const Label l{strong[static_cast<std::size_t>(k)] ? 1 : 0, 1, k};
    if (l.len <= length_budget) heap.push(l);
  }
  while (!heap.empty()) {
    const Label l = heap.top();
    heap.pop();
    if (dominated(l.node, l.cost, l.len)) continue;
    pareto[static_cast<std::size_t>(l.node)].emplace_back(l.cost, l.len);
    if (is_sink[static_cast<std::size_t>(l.node)]) return l.cost;
    for (std::int64_t nf : neighbor_flats(
             cfg, flats[static_cast<std::size_t>(l.node)], false)) {
      const std::int32_t to = node_of[static_cast<std::size_t>(nf)];
      if (to < 0) continue;
      const Label nl{l.cost + (strong[static_cast<std::size_t>(to)] ? 1 : 0),
                     l.len + 1, to};
      if (nl.len > length_budget) continue;
      if (!dominated(to, nl.cost, nl.len)) heap.push(nl);
    }
  }
  return std::nullopt;
}

std::string channels_to_csv(const std::vector<ChannelCsvRow>& rows) {
  std::ostringstream out;
  out << "p,N,delta,nu_x,nu_y,seed,count,normalized,max_length,length_ratio\n";
  for (const ChannelCsvRow& r : rows) {
    out << format_number(r.p) << ',' << format_number(r.scale) << ','
        << format_number(r.delta) << ',' << format_number(r.nu_x) << ','
        << format_number(r.nu_y) << ',' << format_number(r.seed) << ','
        << format_number(r.report.count) << ','
        << format_number(r.report.normalized) << ','
        << format_number(r.report.max_length) << ','
        << format_number(r.report.length_ratio) << '\n';
  }
  return out.str();
}

}  // namespace percspin
