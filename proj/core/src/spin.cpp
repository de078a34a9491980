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

#include "percspin/spin.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "percspin/estimators.hpp"
#include "percspin/io.hpp"
#include "dinic.hpp"
#include "parallel.hpp"
#include "stats.hpp"
#include "union_find.hpp"

namespace percspin {

namespace {

constexpr double kInfinity = std::numeric_limits<double>::infinity();

// Lexicographic (broken_strong, broken_weak) packed into one capacity:
// a strong bond costs 2^32, a weak bond costs 1. Valid while the weak
// count stays below 2^32, which validate_solver_size guarantees.
constexpr std::int64_t kStrongUnit = std::int64_t{1} << 32;

void validate_solver_size(const Window& w) {
  if (w.vertex_count() >= (std::int64_t{1} << 31) ||
      w.bond_count() >= (std::int64_t{1} << 30)) {
    throw std::invalid_argument("window too large for the exact solver");
  }
}

struct FrozenSigns {
  bool has_pos = false;
  bool has_neg = false;
};

// Smallest local index among frozen vertices; the tie-break anchors the
// canonical cut to the side this vertex is frozen to.
std::int64_t anchor_vertex(const SpinField& bc) {
  for (std::size_t v = 0; v < bc.frozen.size(); ++v) {
    if (bc.frozen[v]) return static_cast<std::int64_t>(v);
  }
  throw std::invalid_argument("ground_state requires a frozen vertex");
}

SpinField assemble_field(const SpinField& bc,
                         const std::vector<std::int8_t>& values) {
  SpinField out = bc;
  out.values = values;
  return out;
}

}  // namespace

SpinField SpinField::uniform(const Window& window, int sign, double eps) {
  validate_window(window);
  if (sign != 1 && sign != -1) {
    throw std::invalid_argument("spin sign must be +1 or -1");
  }
  if (!(eps > 0.0)) {
    throw std::invalid_argument("eps must be positive");
  }
  SpinField field;
  field.window = window;
  field.values.assign(static_cast<std::size_t>(window.vertex_count()),
                      static_cast<std::int8_t>(sign));
  field.frozen.assign(static_cast<std::size_t>(window.vertex_count()), 0);
  field.eps = eps;
  return field;
}

std::int64_t SpinField::index(std::int64_t gx, std::int64_t gy) const {
  if (!window.contains_vertex(gx, gy)) {
    throw std::out_of_range("vertex outside window");
  }
  return (gy - window.origin_y) * window.width + (gx - window.origin_x);
}

std::int8_t SpinField::at(std::int64_t gx, std::int64_t gy) const {
  return values[static_cast<std::size_t>(index(gx, gy))];
}

void SpinField::set(std::int64_t gx, std::int64_t gy, int sign, bool freeze) {
  if (sign != 1 && sign != -1) {
    throw std::invalid_argument("spin sign must be +1 or -1");
  }
  const std::size_t idx = static_cast<std::size_t>(index(gx, gy));
  values[idx] = static_cast<std::int8_t>(sign);
  frozen[idx] = freeze ? 1 : 0;
}

EnergyValue energy(const BondConfig& cfg, const SpinField& u) {
  const Window& w = cfg.window();
  if (!(u.window == w)) {
    throw std::invalid_argument("spin field window mismatch");
  }
  EnergyValue out;
  const std::int64_t bonds = w.bond_count();
  for (std::int64_t f = 0; f < bonds; ++f) {
    const auto [a, b] = bond_endpoints(w, bond_from_flat(w, f));
    if (u.at(a.x, a.y) == u.at(b.x, b.y)) continue;
    if (cfg.strong_flat(f)) {
      ++out.broken_strong;
    } else {
      ++out.broken_weak;
    }
  }
  out.finite = out.broken_strong == 0;
  out.value = out.finite ? u.eps * static_cast<double>(out.broken_weak)
                         : kInfinity;
  return out;
}

GroundState ground_state(const BondConfig& cfg, const SpinField& bc) {
  const Window& w = cfg.window();
  if (!(bc.window == w)) {
    throw std::invalid_argument("boundary condition window mismatch");
  }
  validate_solver_size(w);
  const std::int64_t vcount = w.vertex_count();
  const std::int64_t bonds = w.bond_count();

  FrozenSigns signs;
  for (std::int64_t v = 0; v < vcount; ++v) {
    if (!bc.frozen[static_cast<std::size_t>(v)]) continue;
    (bc.values[static_cast<std::size_t>(v)] > 0 ? signs.has_pos
                                                : signs.has_neg) = true;
  }
  if (!signs.has_pos && !signs.has_neg) {
    throw std::invalid_argument("ground_state requires a frozen vertex");
  }
  if (!signs.has_pos || !signs.has_neg) {
    // One frozen sign: the uniform extension breaks nothing.
    SpinField field = bc;
    field.values.assign(static_cast<std::size_t>(vcount),
                        signs.has_pos ? std::int8_t{1} : std::int8_t{-1});
    return GroundState{field, energy(cfg, field)};
  }

  const std::int64_t anchor = anchor_vertex(bc);
  const bool anchor_positive = bc.values[static_cast<std::size_t>(anchor)] > 0;

  // Strong components; a component holding both frozen signs forces a
  // broken strong bond into every separating cut.
  detail::UnionFind uf(vcount);
  for (std::int64_t f = 0; f < bonds; ++f) {
    if (!cfg.strong_flat(f)) continue;
    const auto [a, b] = bond_endpoints(w, bond_from_flat(w, f));
    uf.unite(static_cast<std::int32_t>(bc.index(a.x, a.y)),
             static_cast<std::int32_t>(bc.index(b.x, b.y)));
  }
  std::vector<FrozenSigns> root_signs(static_cast<std::size_t>(vcount));
  bool infinite = false;
  for (std::int64_t v = 0; v < vcount; ++v) {
    if (!bc.frozen[static_cast<std::size_t>(v)]) continue;
    FrozenSigns& rs =
        root_signs[static_cast<std::size_t>(uf.find(static_cast<std::int32_t>(v)))];
    (bc.values[static_cast<std::size_t>(v)] > 0 ? rs.has_pos : rs.has_neg) =
        true;
    if (rs.has_pos && rs.has_neg) infinite = true;
  }

  std::vector<std::int8_t> values(static_cast<std::size_t>(vcount));
  EnergyValue expected;

  if (!infinite) {
    // Contract strong components: within one component every bond is
    // unbroken, so only weak bonds between distinct components can carry
    // capacity. Minimum cut = minimal broken weak count.
    std::vector<std::int32_t> node_of(static_cast<std::size_t>(vcount), -1);
    std::int64_t k = 0;
    for (std::int64_t v = 0; v < vcount; ++v) {
      const std::int32_t r = uf.find(static_cast<std::int32_t>(v));
      if (node_of[static_cast<std::size_t>(r)] < 0) {
        node_of[static_cast<std::size_t>(r)] = static_cast<std::int32_t>(k++);
      }
    }
    const std::int64_t s_node = k;
    const std::int64_t t_node = k + 1;
    detail::Dinic net(k + 2);
    const std::int64_t attach = bonds + 1;
    for (std::int64_t v = 0; v < vcount; ++v) {
      const std::int32_t r = uf.find(static_cast<std::int32_t>(v));
      const FrozenSigns& rs = root_signs[static_cast<std::size_t>(r)];
      const std::int32_t node = node_of[static_cast<std::size_t>(r)];
      if (static_cast<std::int64_t>(v) !=
          static_cast<std::int64_t>(r))  // visit each root once
        continue;
      if (rs.has_pos) net.add_edge(s_node, node, attach);
      if (rs.has_neg) net.add_edge(node, t_node, attach);
    }
    for (std::int64_t f = 0; f < bonds; ++f) {
      if (cfg.strong_flat(f)) continue;
      const auto [a, b] = bond_endpoints(w, bond_from_flat(w, f));
      const std::int32_t ra =
          uf.find(static_cast<std::int32_t>(bc.index(a.x, a.y)));
      const std::int32_t rb =
          uf.find(static_cast<std::int32_t>(bc.index(b.x, b.y)));
      if (ra == rb) continue;
      net.add_edge(node_of[static_cast<std::size_t>(ra)],
                   node_of[static_cast<std::size_t>(rb)], 1, 1);
    }
    const std::int64_t flow = net.max_flow(s_node, t_node);

    // Canonical cut: hug the anchor's side. Hugging the -1 side in the
    // flipped problem is hugging the +1 side in the original, so the
    // choice commutes with global sign flips.
    if (anchor_positive) {
      const std::vector<unsigned char> side = net.source_side(s_node);
      for (std::int64_t v = 0; v < vcount; ++v) {
        const std::int32_t node = node_of[static_cast<std::size_t>(
            uf.find(static_cast<std::int32_t>(v)))];
        values[static_cast<std::size_t>(v)] =
            side[static_cast<std::size_t>(node)] ? 1 : -1;
      }
    } else {
      const std::vector<unsigned char> side = net.sink_side(t_node);
      for (std::int64_t v = 0; v < vcount; ++v) {
        const std::int32_t node = node_of[static_cast<std::size_t>(
            uf.find(static_cast<std::int32_t>(v)))];
        values[static_cast<std::size_t>(v)] =
            side[static_cast<std::size_t>(node)] ? -1 : 1;
      }
    }
    expected.finite = true;
    expected.broken_weak = flow;
    expected.broken_strong = 0;
  } else {
    // Rigidity is unavoidable; minimize (broken_strong, broken_weak)
    // lexicographically on the raw vertex graph.
    const std::int64_t s_node = vcount;
    const std::int64_t t_node = vcount + 1;
    detail::Dinic net(vcount + 2);
    const std::int64_t attach = bonds * kStrongUnit + 1;
    for (std::int64_t v = 0; v < vcount; ++v) {
      if (!bc.frozen[static_cast<std::size_t>(v)]) continue;
      if (bc.values[static_cast<std::size_t>(v)] > 0) {
        net.add_edge(s_node, v, attach);
      } else {
        net.add_edge(v, t_node, attach);
      }
    }
    for (std::int64_t f = 0; f < bonds; ++f) {
      const auto [a, b] = bond_endpoints(w, bond_from_flat(w, f));
      const std::int64_t cap = cfg.strong_flat(f) ? kStrongUnit : 1;
      net.add_edge(bc.index(a.x, a.y), bc.index(b.x, b.y), cap, cap);
    }
    const std::int64_t flow = net.max_flow(s_node, t_node);
    if (anchor_positive) {
      const std::vector<unsigned char> side = net.source_side(s_node);
      for (std::int64_t v = 0; v < vcount; ++v) {
        values[static_cast<std::size_t>(v)] =
            side[static_cast<std::size_t>(v)] ? 1 : -1;
      }
    } else {
      const std::vector<unsigned char> side = net.sink_side(t_node);
      for (std::int64_t v = 0; v < vcount; ++v) {
        values[static_cast<std::size_t>(v)] =
            side[static_cast<std::size_t>(v)] ? -1 : 1;
      }
    }
    expected.finite = false;
    expected.broken_strong = flow / kStrongUnit;
    expected.broken_weak = flow % kStrongUnit;
  }

  SpinField field = assemble_field(bc, values);
  EnergyValue actual = energy(cfg, field);
  if (actual.broken_strong != expected.broken_strong ||
      actual.broken_weak != expected.broken_weak) {
    throw std::logic_error("ground state cut accounting mismatch");
  }
  return GroundState{field, actual};
}

SpinField boundary_rows(const Window& window, double eps) {
  SpinField field = SpinField::uniform(window, 1, eps);
  const std::int64_t top = window.origin_y + window.height - 1;
  for (int i = 0; i < window.width; ++i) {
    field.set(window.origin_x + i, top, 1, true);
    field.set(window.origin_x + i, window.origin_y, -1, true);
  }
  return field;
}

SpinField boundary_halves(const Window& window, double eps) {
  SpinField field = SpinField::uniform(window, 1, eps);
  const auto ring_sign = [&](std::int64_t local_y) {
    return 2 * local_y >= window.height ? 1 : -1;
  };
  for (int i = 0; i < window.width; ++i) {
    field.set(window.origin_x + i, window.origin_y, ring_sign(0), true);
    field.set(window.origin_x + i, window.origin_y + window.height - 1,
              ring_sign(window.height - 1), true);
  }
  for (int j = 0; j < window.height; ++j) {
    field.set(window.origin_x, window.origin_y + j, ring_sign(j), true);
    field.set(window.origin_x + window.width - 1, window.origin_y + j,
              ring_sign(j), true);
  }
  return field;
}

namespace {

// Infinite-energy test without solving: some strong component must carry
// both frozen signs.
bool forced_infinite(const BondConfig& cfg, const SpinField& bc) {
  const Window& w = cfg.window();
  const std::int64_t vcount = w.vertex_count();
  detail::UnionFind uf(vcount);
  const std::int64_t bonds = w.bond_count();
  for (std::int64_t f = 0; f < bonds; ++f) {
    if (!cfg.strong_flat(f)) continue;
    const auto [a, b] = bond_endpoints(w, bond_from_flat(w, f));
    uf.unite(static_cast<std::int32_t>(bc.index(a.x, a.y)),
             static_cast<std::int32_t>(bc.index(b.x, b.y)));
  }
  std::vector<FrozenSigns> root_signs(static_cast<std::size_t>(vcount));
  for (std::int64_t v = 0; v < vcount; ++v) {
    if (!bc.frozen[static_cast<std::size_t>(v)]) continue;
    FrozenSigns& rs = root_signs[static_cast<std::size_t>(
        uf.find(static_cast<std::int32_t>(v)))];
    (bc.values[static_cast<std::size_t>(v)] > 0 ? rs.has_pos : rs.has_neg) =
        true;
    if (rs.has_pos && rs.has_neg) return true;
  }
  return false;
}

}  // namespace

RigidityReport rigidity_probe(double p, int n, std::int64_t trials,
                              std::uint64_t seed, int jobs) {
  if (n < 8) throw std::invalid_argument("rigidity probe needs n >= 8");
  if (trials < 1) throw std::invalid_argument("trials must be positive");
  if (!(p >= 0.0 && p <= 1.0)) {
    throw std::invalid_argument("p must lie in [0, 1]");
  }
  const Window window{n, n, 0, 0};
  const SpinField bc = boundary_halves(window);
  const std::vector<char> hits = detail::ordered_parallel_map<char>(
      trials, jobs, [&](std::int64_t t) -> char {
        const BondConfig cfg =
            BondConfig::sample(window, p, seed ^ static_cast<std::uint64_t>(t));
        return forced_infinite(cfg, bc) ? 1 : 0;
      });
  RigidityReport report;
  report.p = p;
  report.n = n;
  report.trials = trials;
  for (char h : hits) report.infinite_count += h;
  report.fraction =
      static_cast<double>(report.infinite_count) / static_cast<double>(trials);
  return report;
}

InterfaceReport interface_vs_lambda(double p, int n, std::int64_t trials,
                                    std::uint64_t seed, int jobs) {
  if (n < 8) throw std::invalid_argument("interface probe needs n >= 8");
  if (trials < 2) throw std::invalid_argument("need at least two trials");
  if (!(p >= 0.0 && p < 0.5)) {
    throw std::invalid_argument("interface probe requires p < 1/2");
  }
  const Window window{n, n, 0, 0};
  const SpinField bc = boundary_halves(window);
  // -1 marks trials whose ground state is infinite (discarded).
  const std::vector<std::int64_t> cuts =
      detail::ordered_parallel_map<std::int64_t>(
          trials, jobs, [&](std::int64_t t) -> std::int64_t {
            const BondConfig cfg = BondConfig::sample(
                window, p, seed ^ static_cast<std::uint64_t>(t));
            if (forced_infinite(cfg, bc)) return -1;
            return ground_state(cfg, bc).energy.broken_weak;
          });

  InterfaceReport report;
  report.p = p;
  report.n = n;
  report.trials = trials;
  std::vector<double> densities;
  densities.reserve(static_cast<std::size_t>(trials));
  report.min_density = kInfinity;
  for (std::int64_t c : cuts) {
    if (c < 0) {
      ++report.discarded;
      continue;
    }
    const double density = static_cast<double>(c) / static_cast<double>(n);
    densities.push_back(density);
    report.min_density = std::min(report.min_density, density);
  }
  report.used = static_cast<std::int64_t>(densities.size());
  if (report.used == 0) {
    throw std::runtime_error("every interface trial was infinite");
  }
  const detail::MeanSe stats = detail::mean_and_se(densities);
  report.mean_density = stats.mean;
  report.density_se = stats.se;

  const Estimate lambda = estimate_lambda(p, 1.0, 0.0, n, trials, seed, jobs);
  report.lambda_mean = lambda.mean;
  report.lambda_se = lambda.std_error;
  report.drift = std::abs(report.mean_density - report.lambda_mean);
  report.bound =
      3.0 * std::hypot(report.density_se, report.lambda_se) + 8.0 / n;
  report.within = report.drift <= report.bound;
  return report;
}

std::string spin_grid(const SpinField& field) {
  std::string out;
  const Window& w = field.window;
  out.reserve(static_cast<std::size_t>((w.width + 1) * w.height));
  for (int j = 0; j < w.height; ++j) {
    for (int i = 0; i < w.width; ++i) {
      out += field.values[static_cast<std::size_t>(j) * w.width + i] > 0 ? '+'
                                                                         : '-';
    }
    out += '\n';
  }
  return out;
}

std::string energy_json(const EnergyValue& energy) {
  std::string out = "{\"finite\": ";
  out += energy.finite ? "true" : "false";
  out += ", \"value\": ";
  out += energy.finite ? format_number(energy.value) : "\"inf\"";
  out += ", \"broken_weak\": " + format_number(energy.broken_weak);
  out += ", \"broken_strong\": " + format_number(energy.broken_strong);
  out += "}";
  return out;
}

}  // namespace percspin
