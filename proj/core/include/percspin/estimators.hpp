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

#ifndef PERCSPIN_ESTIMATORS_HPP
#define PERCSPIN_ESTIMATORS_HPP

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "percspin/distance.hpp"
#include "percspin/lattice.hpp"

namespace percspin {

struct EstimateParams {
  double p = 0.0;
  double dir_x = 0.0;  // direction actually walked (tau)
  double dir_y = 0.0;
  std::optional<double> beta;  // absent for chemical-distance estimates
  std::uint64_t seed = 0;
};

// Monte Carlo estimate of a normalized distance. Trial t draws its
// configuration from seed ^ t, so estimates sharing (seed, trials) are
// coupled sample by sample across p, beta and direction grids.
struct Estimate {
  double mean = 0.0;
  double std_error = 0.0;  // sample sd of used trials / sqrt(used)
  std::int64_t trials = 0;
  std::int64_t discarded = 0;  // unreachable or unsnappable endpoints
  std::int64_t m = 0;
  EstimateParams params;
  bool valid = false;  // discard rate <= 50% and at least two used trials
  // Per-trial normalized values in trial order; +inf marks a discard.
  std::vector<double> per_trial;
  // Every tenth trial reruns with the window margin doubled; the largest
  // deviation bounds the bias from paths clipped by the window.
  std::int64_t margin_checked = 0;
  double margin_max_dev = 0.0;
};

// Chemical-distance time constant along tau at scale m: per trial the two
// canonical dual anchors near 0 and floor(m*tau) snap to the left-right
// crossing cluster (radius ceil(sqrt(m))) and the bond-inclusive distance
// divides by m. Window: the segment's bounding box plus margin
// ceil(m/2). Requires m >= 8, trials >= 2, tau != 0. Throws
// std::runtime_error when every trial is discarded.
Estimate estimate_lambda(double p, double tau_x, double tau_y, std::int64_t m,
                         std::int64_t trials, std::uint64_t seed, int jobs = 1);

// Weighted passage-time surface tension for normal nu: walks tau = nu_perp
// = (-nu_y, nu_x), averaging passage_time(0, floor(m*tau)) / m. Finite
// weights connect everything, so no trial discards. params.dir records
// the transported direction tau.
Estimate estimate_phi(double p, Beta beta, double nu_x, double nu_y,
                      std::int64_t m, std::int64_t trials, std::uint64_t seed,
                      int jobs = 1);

// Two-point Richardson step in 1/m over {m, 2m}: assuming value(m) = L +
// c/m, extrapolated = 2*mean(2m) - mean(m) recovers L.
struct RefinedEstimate {
  Estimate base;     // scale m
  Estimate doubled;  // scale 2m
  double extrapolated = 0.0;
};

RefinedEstimate refine_lambda(double p, double tau_x, double tau_y,
                              std::int64_t m, std::int64_t trials,
                              std::uint64_t seed, int jobs = 1);
RefinedEstimate refine_phi(double p, Beta beta, double nu_x, double nu_y,
                           std::int64_t m, std::int64_t trials,
                           std::uint64_t seed, int jobs = 1);

// One sweep row: a phi estimate at finite beta, or the chemical-distance
// reference with beta infinite. gap = lambda mean - row mean (0 on the
// reference row itself).
struct SweepRow {
  Beta beta = Beta::infinite();
  Estimate estimate;
  double gap = 0.0;
};

// Phi estimates over an ascending beta grid plus the lambda reference,
// all with identical trial seeds so every comparison is coupled per
// sample. When the reference itself discards every trial (supercritical
// p), its row carries mean +inf and the gaps become infinite instead of
// propagating the error.
std::vector<SweepRow> continuity_sweep(double p, double nu_x, double nu_y,
                                       std::int64_t m,
                                       const std::vector<double>& beta_grid,
                                       std::int64_t trials, std::uint64_t seed,
                                       int jobs = 1);

// Direction table for the surface-tension norm on [0, pi/2), folded by
// the symmetries lambda(nu) = lambda(-nu) = lambda(nu_perp). Lookups
// interpolate linearly in angle unless interpolate is false, in which
// case only grid directions (within 1e-9 rad) are served.
struct LambdaTable {
  std::vector<double> theta;  // ascending, in [0, pi/2)
  std::vector<double> value;
  bool interpolate = true;

  double lookup(double nu_x, double nu_y) const;
};

LambdaTable build_lambda_table(double p, std::int64_t m, std::int64_t trials,
                               std::uint64_t seed, int jobs = 1,
                               int directions_per_quadrant = 16);

// Closed polygon (vertices in order, no repeats, simple) bounding the
// +1 phase; empty means no interface.
struct PolygonalPhase {
  std::vector<std::array<double, 2>> vertices;
};

// Sum over polygon edges of edge length times the table value at the edge
// normal. Throws std::invalid_argument for degenerate or self-crossing
// polygons, or for off-grid normals when interpolation is disabled.
double limit_functional(const PolygonalPhase& phase, const LambdaTable& table);

// CSV: p,beta,tau_x,tau_y,m,trials,discarded,mean,std_error,extrapolated.
// The beta column prints "inf" for chemical-distance rows; without a
// refinement the extrapolated column repeats the mean.
std::string estimate_csv_header();
std::string estimate_csv_row(const Estimate& estimate,
                             std::optional<double> extrapolated = {});
std::string estimate_to_csv(const Estimate& estimate);
std::string refined_to_csv(const RefinedEstimate& refined);

// Sweep CSV appends a gap column; the reference row prints last.
std::string sweep_to_csv(const std::vector<SweepRow>& rows);

}  // namespace percspin

#endif  // PERCSPIN_ESTIMATORS_HPP
