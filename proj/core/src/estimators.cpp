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

#include "percspin/estimators.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "percspin/clusters.hpp"
#include "percspin/io.hpp"
#include "parallel.hpp"
#include "stats.hpp"

namespace percspin {

namespace {

constexpr double kInfinity = std::numeric_limits<double>::infinity();
constexpr double kQuarterTurn = std::numbers::pi / 2.0;

std::int64_t floor_to_int(double v) {
  return static_cast<std::int64_t>(std::floor(v));
}

void validate_common(double p, double dir_x, double dir_y, std::int64_t m,
                     std::int64_t trials) {
  if (!(p >= 0.0 && p <= 1.0)) {
    throw std::invalid_argument("p must lie in [0, 1]");
  }
  if (dir_x == 0.0 && dir_y == 0.0) {
    throw std::invalid_argument("direction must be nonzero");
  }
  if (m < 8) throw std::invalid_argument("scale m must be at least 8");
  if (trials < 2) throw std::invalid_argument("need at least two trials");
}

// Bounding window of the vertex box [minx,maxx] x [miny,maxy] plus margin.
Window margin_window(std::int64_t minx, std::int64_t maxx, std::int64_t miny,
                     std::int64_t maxy, std::int64_t margin) {
  const std::int64_t width = maxx - minx + 2 * margin + 1;
  const std::int64_t height = maxy - miny + 2 * margin + 1;
  if (width > (1 << 26) || height > (1 << 26)) {
    throw std::invalid_argument("scale too large for an in-memory window");
  }
  return Window{static_cast<int>(width), static_cast<int>(height),
                minx - margin, miny - margin};
}

// Per-trial sampler returning the normalized value or +inf for a discard.
template <typename TrialFn>
Estimate run_trials(double p, double dir_x, double dir_y, std::int64_t m,
                    std::int64_t trials, std::uint64_t seed, int jobs,
                    std::optional<double> beta, TrialFn&& trial) {
  std::vector<double> values = detail::ordered_parallel_map<double>(
      trials, jobs, [&](std::int64_t t) {
        return trial(seed ^ static_cast<std::uint64_t>(t), /*margin_mult=*/1);
      });

  // Margin sensitivity: rerun every tenth trial with the margin doubled;
  // the counter-based sampler keeps the shared bonds identical, so any
  // deviation is a pure window-size effect.
  const std::int64_t probes = (trials + 9) / 10;
  std::vector<double> probe_dev = detail::ordered_parallel_map<double>(
      probes, jobs, [&](std::int64_t k) {
        const std::int64_t t = 10 * k;
        const double wide =
            trial(seed ^ static_cast<std::uint64_t>(t), /*margin_mult=*/2);
        const double base = values[static_cast<std::size_t>(t)];
        if (std::isinf(base) && std::isinf(wide)) return 0.0;
        if (std::isinf(base) || std::isinf(wide)) return kInfinity;
        return std::abs(wide - base);
      });

  Estimate est;
  est.trials = trials;
  est.m = m;
  est.params = EstimateParams{p, dir_x, dir_y, beta, seed};
  est.per_trial = std::move(values);
  est.margin_checked = probes;
  for (double d : probe_dev) est.margin_max_dev = std::max(est.margin_max_dev, d);

  std::vector<double> used;
  used.reserve(est.per_trial.size());
  for (double v : est.per_trial) {
    if (std::isinf(v)) {
      ++est.discarded;
    } else {
      used.push_back(v);
    }
  }
  if (used.empty()) {
    throw std::runtime_error("every trial was discarded");
  }
  const detail::MeanSe stats = detail::mean_and_se(used);
  est.mean = stats.mean;
  est.std_error = stats.se;
  est.valid = est.discarded * 2 <= trials &&
              static_cast<std::int64_t>(used.size()) >= 2;
  return est;
}

}  // namespace

Estimate estimate_lambda(double p, double tau_x, double tau_y, std::int64_t m,
                         std::int64_t trials, std::uint64_t seed, int jobs) {
  validate_common(p, tau_x, tau_y, m, trials);
  const std::int64_t bx = floor_to_int(static_cast<double>(m) * tau_x);
  const std::int64_t by = floor_to_int(static_cast<double>(m) * tau_y);
  // Canonical anchors: midpoints of (0,0)-(1,0) and B-(B+e1).
  const DualPoint a{1, 0};
  const DualPoint b{2 * bx + 1, 2 * by};
  const std::int64_t margin = (m + 1) / 2;
  const std::int64_t radius =
      static_cast<std::int64_t>(std::ceil(std::sqrt(static_cast<double>(m))));
  const std::int64_t minx = std::min<std::int64_t>(0, bx);
  const std::int64_t maxx = std::max<std::int64_t>(1, bx + 1);
  const std::int64_t miny = std::min<std::int64_t>(0, by);
  const std::int64_t maxy = std::max<std::int64_t>(0, by);

  const auto trial = [&](std::uint64_t trial_seed, int margin_mult) {
    const Window window =
        margin_window(minx, maxx, miny, maxy, margin * margin_mult);
    const BondConfig cfg = BondConfig::sample(window, p, trial_seed);
    const ClusterLabels labels = weak_clusters(cfg);
    const auto sa = snap_to_cluster(cfg, labels, a, radius);
    const auto sb = snap_to_cluster(cfg, labels, b, radius);
    if (!sa || !sb) return kInfinity;
    const PathResult d = chemical_distance(cfg, *sa, *sb);
    if (!d.reachable) return kInfinity;
    return d.value / static_cast<double>(m);
  };
  return run_trials(p, tau_x, tau_y, m, trials, seed, jobs, std::nullopt,
                    trial);
}

Estimate estimate_phi(double p, Beta beta, double nu_x, double nu_y,
                      std::int64_t m, std::int64_t trials, std::uint64_t seed,
                      int jobs) {
  if (beta.is_infinite()) {
    throw std::invalid_argument("phi estimates need a finite beta");
  }
  // Walk the rotated direction: phi(nu) follows tau = nu_perp.
  const double tau_x = -nu_y;
  const double tau_y = nu_x;
  validate_common(p, tau_x, tau_y, m, trials);
  const std::int64_t bx = floor_to_int(static_cast<double>(m) * tau_x);
  const std::int64_t by = floor_to_int(static_cast<double>(m) * tau_y);
  const Vertex target{bx, by};
  const std::int64_t margin = (m + 1) / 2;
  const std::int64_t minx = std::min<std::int64_t>(0, bx);
  const std::int64_t maxx = std::max<std::int64_t>(0, bx);
  const std::int64_t miny = std::min<std::int64_t>(0, by);
  const std::int64_t maxy = std::max<std::int64_t>(0, by);

  const auto trial = [&](std::uint64_t trial_seed, int margin_mult) {
    const Window window =
        margin_window(minx, maxx, miny, maxy, margin * margin_mult);
    const BondConfig cfg = BondConfig::sample(window, p, trial_seed);
    const PathResult d = passage_time(cfg, beta, Vertex{0, 0}, target);
    if (!d.reachable) return kInfinity;
    return d.value / static_cast<double>(m);
  };
  return run_trials(p, tau_x, tau_y, m, trials, seed, jobs, beta.value(),
                    trial);
}

namespace {

RefinedEstimate refine(const Estimate& base, const Estimate& doubled) {
  RefinedEstimate out;
  out.base = base;
  out.doubled = doubled;
  out.extrapolated = 2.0 * doubled.mean - base.mean;
  return out;
}

}  // namespace

RefinedEstimate refine_lambda(double p, double tau_x, double tau_y,
                              std::int64_t m, std::int64_t trials,
                              std::uint64_t seed, int jobs) {
  return refine(estimate_lambda(p, tau_x, tau_y, m, trials, seed, jobs),
                estimate_lambda(p, tau_x, tau_y, 2 * m, trials, seed, jobs));
}

RefinedEstimate refine_phi(double p, Beta beta, double nu_x, double nu_y,
                           std::int64_t m, std::int64_t trials,
                           std::uint64_t seed, int jobs) {
  return refine(estimate_phi(p, beta, nu_x, nu_y, m, trials, seed, jobs),
                estimate_phi(p, beta, nu_x, nu_y, 2 * m, trials, seed, jobs));
}

std::vector<SweepRow> continuity_sweep(double p, double nu_x, double nu_y,
                                       std::int64_t m,
                                       const std::vector<double>& beta_grid,
                                       std::int64_t trials, std::uint64_t seed,
                                       int jobs) {
  if (beta_grid.empty()) {
    throw std::invalid_argument("beta grid must be nonempty");
  }
  for (std::size_t i = 0; i + 1 < beta_grid.size(); ++i) {
    if (!(beta_grid[i] < beta_grid[i + 1])) {
      throw std::invalid_argument("beta grid must ascend");
    }
  }
  const double tau_x = -nu_y;
  const double tau_y = nu_x;

  Estimate lambda;
  try {
    lambda = estimate_lambda(p, tau_x, tau_y, m, trials, seed, jobs);
  } catch (const std::runtime_error&) {
    // No usable trial (expected for p >= 1/2): keep the row with an
    // infinite mean so the gaps read as infinite instead of failing.
    lambda.mean = kInfinity;
    lambda.std_error = 0.0;
    lambda.trials = trials;
    lambda.discarded = trials;
    lambda.m = m;
    lambda.params = EstimateParams{p, tau_x, tau_y, std::nullopt, seed};
    lambda.valid = false;
    lambda.per_trial.assign(static_cast<std::size_t>(trials), kInfinity);
  }

  std::vector<SweepRow> rows;
  rows.reserve(beta_grid.size() + 1);
  for (double b : beta_grid) {
    SweepRow row;
    row.beta = Beta::finite(b);
    row.estimate = estimate_phi(p, Beta::finite(b), nu_x, nu_y, m, trials,
                                seed, jobs);
    row.gap = lambda.mean - row.estimate.mean;
    rows.push_back(std::move(row));
  }
  SweepRow ref;
  ref.beta = Beta::infinite();
  ref.estimate = std::move(lambda);
  ref.gap = 0.0;
  rows.push_back(std::move(ref));
  return rows;
}

double LambdaTable::lookup(double nu_x, double nu_y) const {
  if (theta.empty() || theta.size() != value.size()) {
    throw std::invalid_argument("lambda table is empty or inconsistent");
  }
  if (nu_x == 0.0 && nu_y == 0.0) {
    throw std::invalid_argument("direction must be nonzero");
  }
  // Fold by nu -> -nu and nu -> nu_perp into [0, pi/2).
  double th = std::atan2(nu_y, nu_x);
  if (th < 0.0) th += std::numbers::pi;
  if (th >= std::numbers::pi) th -= std::numbers::pi;
  if (th >= kQuarterTurn) th -= kQuarterTurn;
  if (th < 0.0) th = 0.0;

  if (!interpolate) {
    for (std::size_t k = 0; k < theta.size(); ++k) {
      double d = std::abs(th - theta[k]);
      d = std::min(d, kQuarterTurn - d);  // angular distance mod pi/2
      if (d <= 1e-9) return value[k];
    }
    throw std::invalid_argument(
        "direction not on the table grid and interpolation is disabled");
  }
  if (theta.size() == 1) return value.front();
  if (th < theta.front() || th >= theta.back()) {
    // Wrap segment theta.back() .. theta.front() + pi/2.
    const double x = th < theta.front() ? th + kQuarterTurn : th;
    const double t0 = theta.back();
    const double t1 = theta.front() + kQuarterTurn;
    const double u = (x - t0) / (t1 - t0);
    return value.back() + u * (value.front() - value.back());
  }
  const auto it = std::upper_bound(theta.begin(), theta.end(), th);
  const std::size_t hi = static_cast<std::size_t>(it - theta.begin());
  const std::size_t lo = hi - 1;
  const double u = (th - theta[lo]) / (theta[hi] - theta[lo]);
  return value[lo] + u * (value[hi] - value[lo]);
}

LambdaTable build_lambda_table(double p, std::int64_t m, std::int64_t trials,
                               std::uint64_t seed, int jobs,
                               int directions_per_quadrant) {
  if (directions_per_quadrant < 1) {
    throw std::invalid_argument("need at least one direction");
  }
  LambdaTable table;
  table.interpolate = true;
  for (int k = 0; k < directions_per_quadrant; ++k) {
    const double th =
        kQuarterTurn * static_cast<double>(k) / directions_per_quadrant;
    const Estimate est = estimate_lambda(p, std::cos(th), std::sin(th), m,
                                         trials, seed, jobs);
    table.theta.push_back(th);
    table.value.push_back(est.mean);
  }
  return table;
}

namespace {

double cross(const std::array<double, 2>& o, const std::array<double, 2>& a,
             const std::array<double, 2>& b) {
  return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0]);
}

bool on_segment(const std::array<double, 2>& a, const std::array<double, 2>& b,
                const std::array<double, 2>& q) {
  return cross(a, b, q) == 0.0 && q[0] >= std::min(a[0], b[0]) &&
         q[0] <= std::max(a[0], b[0]) && q[1] >= std::min(a[1], b[1]) &&
         q[1] <= std::max(a[1], b[1]);
}

bool segments_touch(const std::array<double, 2>& a,
                    const std::array<double, 2>& b,
                    const std::array<double, 2>& c,
                    const std::array<double, 2>& d) {
  const double d1 = cross(c, d, a);
  const double d2 = cross(c, d, b);
  const double d3 = cross(a, b, c);
  const double d4 = cross(a, b, d);
  if (((d1 > 0 && d2 < 0) || (d1 < 0 && d2 > 0)) &&
      ((d3 > 0 && d4 < 0) || (d3 < 0 && d4 > 0))) {
    return true;
  }
  return on_segment(c, d, a) || on_segment(c, d, b) || on_segment(a, b, c) ||
         on_segment(a, b, d);
}

}  // namespace

double limit_functional(const PolygonalPhase& phase, const LambdaTable& table) {
  const auto& v = phase.vertices;
  const std::size_t n = v.size();
  if (n == 0) return 0.0;
  if (n < 3) throw std::invalid_argument("polygon needs at least 3 vertices");
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if (v[i] == v[j]) {
        throw std::invalid_argument("polygon vertices must be distinct");
      }
    }
  }
  // Simplicity: non-adjacent edges must not touch at all, adjacent edges
  // only at the shared vertex (no collinear backtracking).
  for (std::size_t i = 0; i < n; ++i) {
    const auto& a = v[i];
    const auto& b = v[(i + 1) % n];
    for (std::size_t j = i + 1; j < n; ++j) {
      const auto& c = v[j];
      const auto& d = v[(j + 1) % n];
      const bool share_b = (i + 1) % n == j;
      const bool share_a = (j + 1) % n == i;
      if (share_b || share_a) {
        const auto& shared = share_b ? b : a;
        const auto& p1 = share_b ? a : b;
        const auto& p2 = share_b ? d : c;
        if (cross(shared, p1, p2) == 0.0 &&
            (p1[0] - shared[0]) * (p2[0] - shared[0]) +
                    (p1[1] - shared[1]) * (p2[1] - shared[1]) >
                0.0) {
          throw std::invalid_argument("polygon backtracks on itself");
        }
        continue;
      }
      if (segments_touch(a, b, c, d)) {
        throw std::invalid_argument("polygon edges cross");
      }
    }
  }

  double total = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const auto& a = v[i];
    const auto& b = v[(i + 1) % n];
    const double dx = b[0] - a[0];
    const double dy = b[1] - a[1];
    const double len = std::hypot(dx, dy);
    total += len * table.lookup(dy / len, -dx / len);
  }
  return total;
}

std::string estimate_csv_header() {
  return "p,beta,tau_x,tau_y,m,trials,discarded,mean,std_error,extrapolated";
}

std::string estimate_csv_row(const Estimate& estimate,
                             std::optional<double> extrapolated) {
  std::string row = format_number(estimate.params.p);
  row += ',';
  row += estimate.params.beta ? format_number(*estimate.params.beta)
                              : std::string("inf");
  row += ',';
  row += format_number(estimate.params.dir_x);
  row += ',';
  row += format_number(estimate.params.dir_y);
  row += ',';
  row += format_number(estimate.m);
  row += ',';
  row += format_number(estimate.trials);
  row += ',';
  row += format_number(estimate.discarded);
  row += ',';
  row += format_number(estimate.mean);
  row += ',';
  row += format_number(estimate.std_error);
  row += ',';
  row += format_number(extrapolated.value_or(estimate.mean));
  return row;
}

std::string estimate_to_csv(const Estimate& estimate) {
  return estimate_csv_header() + "\n" + estimate_csv_row(estimate) + "\n";
}

std::string refined_to_csv(const RefinedEstimate& refined) {
  std::string out = estimate_csv_header();
  out += '\n';
  out += estimate_csv_row(refined.base, refined.extrapolated);
  out += '\n';
  out += estimate_csv_row(refined.doubled, refined.extrapolated);
  out += '\n';
  return out;
}

std::string sweep_to_csv(const std::vector<SweepRow>& rows) {
  std::string out = estimate_csv_header() + ",gap\n";
  for (const SweepRow& row : rows) {
    out += estimate_csv_row(row.estimate);
    out += ',';
    out += format_number(row.gap);
    out += '\n';
  }
  return out;
}

}  // namespace percspin
