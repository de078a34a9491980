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

// Experiment runner: every library operation as a subcommand with
// reproducible seeds. Artifacts go to --output (or stdout), a one-line
// summary goes to the other stream. Exit codes: 0 success, 2 parameter
// validation, 3 runtime failure.

#include <cmath>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <limits>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "percspin/channels.hpp"
#include "percspin/clusters.hpp"
#include "percspin/distance.hpp"
#include "percspin/estimators.hpp"
#include "percspin/io.hpp"
#include "percspin/lattice.hpp"
#include "percspin/spin.hpp"

namespace {

using json = nlohmann::ordered_json;
using namespace percspin;

// Infinities survive JSON as the quoted string "inf" (nlohmann would
// otherwise emit null).
json json_number(double v) {
  if (std::isfinite(v)) return json(v);
  return json(format_number(v));
}

struct Output {
  std::string path;
  std::string format = "csv";

  // Artifact to the file (or stdout), summary to the remaining stream.
  void write(const std::string& artifact, const std::string& summary) const {
    if (path.empty()) {
      std::cout << artifact;
      if (!artifact.empty() && artifact.back() != '\n') std::cout << '\n';
      std::cerr << summary << '\n';
      return;
    }
    std::ofstream file(path, std::ios::binary);
    if (!file) throw std::runtime_error("cannot write output path: " + path);
    file << artifact;
    if (!artifact.empty() && artifact.back() != '\n') file << '\n';
    if (!file) throw std::runtime_error("cannot write output path: " + path);
    std::cout << summary << '\n';
  }
};

void add_output_flags(CLI::App* cmd, const std::shared_ptr<Output>& out) {
  cmd->add_option("--output,-o", out->path, "artifact file (default stdout)");
  cmd->add_option("--format", out->format, "artifact format")
      ->check(CLI::IsMember({"csv", "json"}))
      ->capture_default_str();
}

Window make_window(std::int64_t width, std::int64_t height, std::int64_t ox,
                   std::int64_t oy) {
  if (width < 2 || height < 2 || width > (1 << 26) || height > (1 << 26)) {
    throw std::invalid_argument("window sides must lie in [2, 2^26]");
  }
  const Window window{static_cast<int>(width), static_cast<int>(height), ox,
                      oy};
  validate_window(window);
  return window;
}

std::string bool_digit(bool b) { return b ? "1" : "0"; }

// ---------------------------------------------------------------- sample

struct SampleParams {
  double p = 0.0;
  std::int64_t width = 0, height = 0, ox = 0, oy = 0;
  std::uint64_t seed = 0;
  Output out;
};

void run_sample(const SampleParams& a) {
  const Window window = make_window(a.width, a.height, a.ox, a.oy);
  const BondConfig cfg = BondConfig::sample(window, a.p, a.seed);
  const std::string summary =
      "sampled " + format_number(a.width) + "x" + format_number(a.height) +
      " window at p=" + format_number(a.p) + ": " +
      format_number(cfg.strong_count()) + " strong / " +
      format_number(window.bond_count()) + " bonds";
  a.out.write(cfg.serialize(), summary);
}

// -------------------------------------------------------------- clusters

struct ClustersParams {
  double p = 0.0;
  std::int64_t width = 0, height = 0, ox = 0, oy = 0;
  std::uint64_t seed = 0;
  Output out;
};

void run_clusters(const ClustersParams& a) {
  const Window window = make_window(a.width, a.height, a.ox, a.oy);
  const BondConfig cfg = BondConfig::sample(window, a.p, a.seed);
  const ClusterLabels labels = weak_clusters(cfg);
  std::string artifact;
  if (a.out.format == "csv") {
    artifact = "cluster_id,size\n";
    for (std::size_t id = 0; id < labels.sizes.size(); ++id) {
      artifact += format_number(static_cast<std::int64_t>(id)) + "," +
                  format_number(labels.sizes[id]) + "\n";
    }
  } else {
    json j;
    j["clusters"] = json::array();
    for (std::size_t id = 0; id < labels.sizes.size(); ++id) {
      j["clusters"].push_back(
          json{{"id", id}, {"size", labels.sizes[id]}});
    }
    j["largest_id"] = labels.largest_id;
    j["left_right_crossing_id"] =
        labels.left_right_crossing_id
            ? json(*labels.left_right_crossing_id)
            : json(nullptr);
    artifact = j.dump() + "\n";
  }
  std::string summary = format_number(static_cast<std::int64_t>(
                            labels.sizes.size())) +
                        " weak clusters";
  if (labels.largest_id >= 0) {
    summary += ", largest " +
               format_number(
                   labels.sizes[static_cast<std::size_t>(labels.largest_id)]) +
               " bonds (id " + format_number(labels.largest_id) + ")";
  }
  summary += labels.left_right_crossing_id
                 ? ", crossing id " +
                       format_number(*labels.left_right_crossing_id)
                 : std::string(", no crossing cluster");
  a.out.write(artifact, summary);
}

// -------------------------------------------------------------- crossing

struct CrossingParams {
  double p = 0.0;
  std::int64_t width = 0, height = 0;
  std::int64_t trials = 0;
  std::uint64_t seed = 0;
  std::string direction = "lr";
  int jobs = 1;
  Output out;
};

void run_crossing(const CrossingParams& a) {
  const Window window = make_window(a.width, a.height, 0, 0);
  if (a.trials < 1) throw std::invalid_argument("trials must be positive");
  const CrossDirection dir = a.direction == "lr" ? CrossDirection::kLeftRight
                                                 : CrossDirection::kBottomTop;
  std::int64_t hits = 0;
  for (std::int64_t t = 0; t < a.trials; ++t) {
    const BondConfig cfg = BondConfig::sample(
        window, a.p, a.seed ^ static_cast<std::uint64_t>(t));
    hits += has_weak_crossing(cfg, dir) ? 1 : 0;
  }
  const double freq =
      static_cast<double>(hits) / static_cast<double>(a.trials);
  const double se =
      std::sqrt(freq * (1.0 - freq) / static_cast<double>(a.trials));
  std::string artifact;
  if (a.out.format == "csv") {
    artifact = "p,width,height,trials,direction,frequency,se\n" +
               format_number(a.p) + "," + format_number(a.width) + "," +
               format_number(a.height) + "," + format_number(a.trials) + "," +
               a.direction + "," + format_number(freq) + "," +
               format_number(se) + "\n";
  } else {
    json j{{"p", a.p},           {"width", a.width},
           {"height", a.height}, {"trials", a.trials},
           {"direction", a.direction}, {"frequency", freq},
           {"se", se}};
    artifact = j.dump() + "\n";
  }
  a.out.write(artifact, "crossing frequency " + format_number(freq) +
                            " (se " + format_number(se) + ") over " +
                            format_number(a.trials) + " trials");
}

// ------------------------------------------------------------------ scan

struct ScanParams {
  std::int64_t width = 0, height = 0;
  double pmin = 0.0, pmax = 1.0;
  std::int64_t steps = 11;
  std::int64_t trials = 0;
  std::uint64_t seed = 0;
  int jobs = 1;
  Output out;
};

void run_scan(const ScanParams& a) {
  const Window window = make_window(a.width, a.height, 0, 0);
  if (a.steps < 1) throw std::invalid_argument("steps must be positive");
  if (!(a.pmin <= a.pmax)) {
    throw std::invalid_argument("pmin must not exceed pmax");
  }
  std::vector<double> grid;
  if (a.steps == 1) {
    grid.push_back(a.pmin);
  } else {
    for (std::int64_t i = 0; i < a.steps; ++i) {
      grid.push_back(a.pmin + (a.pmax - a.pmin) * static_cast<double>(i) /
                                  static_cast<double>(a.steps - 1));
    }
  }
  const std::vector<ScanRow> rows =
      threshold_scan(window, grid, a.trials, a.seed, a.jobs);
  std::string artifact;
  if (a.out.format == "csv") {
    artifact = scan_to_csv(rows);
  } else {
    json j = json::array();
    for (const ScanRow& r : rows) {
      j.push_back(json{{"p", r.p},
                       {"trials", r.trials},
                       {"crossing_freq", r.crossing_freq},
                       {"crossing_se", r.crossing_se},
                       {"largest_fraction", r.largest_fraction},
                       {"largest_fraction_se", r.largest_fraction_se}});
    }
    artifact = j.dump() + "\n";
  }
  a.out.write(artifact, "scanned " +
                            format_number(static_cast<std::int64_t>(
                                grid.size())) +
                            " p values, " + format_number(a.trials) +
                            " trials each");
}

// -------------------------------------------------------------- distance

struct DistanceParams {
  double p = 0.0;
  std::int64_t width = 0, height = 0, ox = 0, oy = 0;
  std::uint64_t seed = 0;
  std::vector<std::int64_t> from, to;
  std::string path_file;
  Output out;
};

void run_distance(const DistanceParams& a) {
  const Window window = make_window(a.width, a.height, a.ox, a.oy);
  const BondConfig cfg = BondConfig::sample(window, a.p, a.seed);
  const DualPoint from{a.from[0], a.from[1]};
  const DualPoint to{a.to[0], a.to[1]};
  const PathResult r = chemical_distance(cfg, from, to);
  if (!a.path_file.empty() && r.reachable) {
    std::string dump = "x2,y2\n";
    for (const BondId& bond : r.bond_path) {
      const DualPoint mid = dual_midpoint(window, bond);
      dump += format_number(mid.x2) + "," + format_number(mid.y2) + "\n";
    }
    std::ofstream f(a.path_file, std::ios::binary);
    if (!f) throw std::runtime_error("cannot write path file: " + a.path_file);
    f << dump;
  }
  std::string artifact;
  if (a.out.format == "csv") {
    artifact =
        "from_x2,from_y2,to_x2,to_y2,reachable,value\n" +
        format_number(from.x2) + "," + format_number(from.y2) + "," +
        format_number(to.x2) + "," + format_number(to.y2) + "," +
        bool_digit(r.reachable) + "," + format_number(r.value) + "\n";
  } else {
    json j{{"from", {from.x2, from.y2}},
           {"to", {to.x2, to.y2}},
           {"reachable", r.reachable},
           {"value", json_number(r.value)}};
    artifact = j.dump() + "\n";
  }
  a.out.write(artifact, r.reachable
                            ? "chemical distance " + format_number(r.value)
                            : std::string("unreachable"));
}

// ------------------------------------------------------- lambda and phi

json estimate_json(const Estimate& e) {
  json j{{"p", e.params.p},
         {"beta", e.params.beta ? json_number(*e.params.beta) : json("inf")},
         {"tau_x", e.params.dir_x},
         {"tau_y", e.params.dir_y},
         {"m", e.m},
         {"trials", e.trials},
         {"discarded", e.discarded},
         {"mean", json_number(e.mean)},
         {"std_error", json_number(e.std_error)},
         {"valid", e.valid},
         {"margin_checked", e.margin_checked},
         {"margin_max_dev", json_number(e.margin_max_dev)}};
  return j;
}

struct LambdaParams {
  double p = 0.0;
  std::vector<double> tau;
  std::int64_t m = 0;
  std::int64_t trials = 0;
  std::uint64_t seed = 0;
  int jobs = 1;
  bool refine = false;
  Output out;
};

void run_lambda(const LambdaParams& a) {
  std::string artifact;
  std::string summary;
  if (a.refine) {
    const RefinedEstimate r =
        refine_lambda(a.p, a.tau[0], a.tau[1], a.m, a.trials, a.seed, a.jobs);
    if (a.out.format == "csv") {
      artifact = refined_to_csv(r);
    } else {
      json j{{"base", estimate_json(r.base)},
             {"doubled", estimate_json(r.doubled)},
             {"extrapolated", json_number(r.extrapolated)}};
      artifact = j.dump() + "\n";
    }
    summary = "lambda mean " + format_number(r.base.mean) +
              " extrapolated " + format_number(r.extrapolated);
  } else {
    const Estimate e =
        estimate_lambda(a.p, a.tau[0], a.tau[1], a.m, a.trials, a.seed,
                        a.jobs);
    artifact = a.out.format == "csv" ? estimate_to_csv(e)
                                     : estimate_json(e).dump() + "\n";
    summary = "lambda mean " + format_number(e.mean) + " se " +
              format_number(e.std_error) + " (discarded " +
              format_number(e.discarded) + "/" + format_number(e.trials) +
              ")";
  }
  a.out.write(artifact, summary);
}

struct PhiParams {
  double p = 0.0;
  double beta = 1.0;
  std::vector<double> nu;
  std::int64_t m = 0;
  std::int64_t trials = 0;
  std::uint64_t seed = 0;
  int jobs = 1;
  bool refine = false;
  Output out;
};

void run_phi(const PhiParams& a) {
  const Beta beta = Beta::finite(a.beta);
  std::string artifact;
  std::string summary;
  if (a.refine) {
    const RefinedEstimate r = refine_phi(a.p, beta, a.nu[0], a.nu[1], a.m,
                                         a.trials, a.seed, a.jobs);
    if (a.out.format == "csv") {
      artifact = refined_to_csv(r);
    } else {
      json j{{"base", estimate_json(r.base)},
             {"doubled", estimate_json(r.doubled)},
             {"extrapolated", json_number(r.extrapolated)}};
      artifact = j.dump() + "\n";
    }
    summary = "phi mean " + format_number(r.base.mean) + " extrapolated " +
              format_number(r.extrapolated);
  } else {
    const Estimate e =
        estimate_phi(a.p, beta, a.nu[0], a.nu[1], a.m, a.trials, a.seed,
                     a.jobs);
    artifact = a.out.format == "csv" ? estimate_to_csv(e)
                                     : estimate_json(e).dump() + "\n";
    summary = "phi mean " + format_number(e.mean) + " se " +
              format_number(e.std_error);
  }
  a.out.write(artifact, summary);
}

// ----------------------------------------------------------------- sweep

struct SweepParams {
  double p = 0.0;
  std::vector<double> nu;
  std::int64_t m = 0;
  std::vector<double> betas;
  std::int64_t trials = 0;
  std::uint64_t seed = 0;
  int jobs = 1;
  Output out;
};

void run_sweep(const SweepParams& a) {
  const std::vector<SweepRow> rows = continuity_sweep(
      a.p, a.nu[0], a.nu[1], a.m, a.betas, a.trials, a.seed, a.jobs);
  std::string artifact;
  if (a.out.format == "csv") {
    artifact = sweep_to_csv(rows);
  } else {
    json j = json::array();
    for (const SweepRow& row : rows) {
      json r = estimate_json(row.estimate);
      r["beta"] = row.beta.is_infinite() ? json("inf")
                                         : json_number(row.beta.value());
      r["gap"] = json_number(row.gap);
      j.push_back(std::move(r));
    }
    artifact = j.dump() + "\n";
  }
  const SweepRow& last_phi = rows[rows.size() - 2];
  const SweepRow& ref = rows.back();
  a.out.write(artifact,
              "lambda " + format_number(ref.estimate.mean) +
                  ", gap at beta=" + format_number(last_phi.beta.value()) +
                  ": " + format_number(last_phi.gap));
}

// -------------------------------------------------------------- channels

struct ChannelsParams {
  double p = 0.0;
  std::vector<std::int64_t> nu;
  double delta = 1.0;
  double scale = 0.0;
  std::vector<double> center{0.0, 0.0};
  std::uint64_t seed = 0;
  Output out;
};

RectangleSpec channels_rect(const ChannelsParams& a) {
  return RectangleSpec::make(a.center[0], a.center[1], a.nu[0], a.nu[1],
                             a.delta, a.scale);
}

void emit_channels(const ChannelsParams& a, const RectangleSpec& rect,
                   const ChannelReport& report, const char* kind) {
  std::string artifact;
  if (a.out.format == "csv") {
    artifact = channels_to_csv({ChannelCsvRow{a.p, rect.scale, rect.delta,
                                              rect.nu_x(), rect.nu_y(), a.seed,
                                              report}});
  } else {
    json j{{"p", a.p},
           {"N", rect.scale},
           {"delta", rect.delta},
           {"nu_x", rect.nu_x()},
           {"nu_y", rect.nu_y()},
           {"seed", a.seed},
           {"count", report.count},
           {"normalized", report.normalized},
           {"max_length", report.max_length},
           {"length_ratio", report.length_ratio}};
    artifact = j.dump() + "\n";
  }
  a.out.write(artifact, format_number(report.count) + " disjoint " + kind +
                            " channels, normalized " +
                            format_number(report.normalized) +
                            ", max length " +
                            format_number(report.max_length));
}

void run_channels(const ChannelsParams& a) {
  const RectangleSpec rect = channels_rect(a);
  const BondConfig cfg =
      BondConfig::sample(rect.bounding_window(), a.p, a.seed);
  emit_channels(a, rect, count_disjoint_channels(cfg, rect), "weak");
}

void run_strongchannels(const ChannelsParams& a) {
  const RectangleSpec rect = channels_rect(a);
  const BondConfig cfg =
      BondConfig::sample(rect.bounding_window(), a.p, a.seed);
  emit_channels(a, rect, count_strong_dual_channels(cfg, rect), "strong dual");
}

// ------------------------------------------------------------ percentage

struct PercentageParams {
  ChannelsParams base;
  std::int64_t budget = 0;
};

void run_percentage(const PercentageParams& a) {
  const RectangleSpec rect = channels_rect(a.base);
  const BondConfig cfg =
      BondConfig::sample(rect.bounding_window(), a.base.p, a.base.seed);
  const std::optional<std::int64_t> links =
      strong_link_percentage(cfg, rect, a.budget);
  std::string artifact;
  if (a.base.out.format == "csv") {
    artifact = "p,N,delta,nu_x,nu_y,seed,budget,min_strong_links\n" +
               format_number(a.base.p) + "," + format_number(rect.scale) +
               "," + format_number(rect.delta) + "," +
               format_number(rect.nu_x()) + "," + format_number(rect.nu_y()) +
               "," + format_number(a.base.seed) + "," +
               format_number(a.budget) + "," +
               (links ? format_number(*links) : std::string("none")) + "\n";
  } else {
    json j{{"p", a.base.p},
           {"N", rect.scale},
           {"delta", rect.delta},
           {"nu_x", rect.nu_x()},
           {"nu_y", rect.nu_y()},
           {"seed", a.base.seed},
           {"budget", a.budget},
           {"min_strong_links", links ? json(*links) : json(nullptr)}};
    artifact = j.dump() + "\n";
  }
  a.base.out.write(artifact,
                   links ? "minimal strong links " + format_number(*links) +
                               " within budget " + format_number(a.budget)
                         : "no channel within budget " +
                               format_number(a.budget));
}

// ------------------------------------------------------ energy and spins

SpinField build_bc(const std::string& bc, const Window& window, double eps) {
  if (bc == "halves") return boundary_halves(window, eps);
  if (bc == "rows") return boundary_rows(window, eps);
  return SpinField::uniform(window, 1, eps);
}

struct EnergyParams {
  double p = 0.0;
  std::int64_t width = 0, height = 0, ox = 0, oy = 0;
  std::uint64_t seed = 0;
  double eps = 1.0;
  std::string bc = "uniform";
  std::vector<std::string> flips;
  Output out;
};

void run_energy(const EnergyParams& a) {
  const Window window = make_window(a.width, a.height, a.ox, a.oy);
  const BondConfig cfg = BondConfig::sample(window, a.p, a.seed);
  SpinField field = build_bc(a.bc, window, a.eps);
  for (const std::string& flip : a.flips) {
    const auto comma = flip.find(',');
    if (comma == std::string::npos) {
      throw std::invalid_argument("--flip expects x,y");
    }
    const std::int64_t x = std::stoll(flip.substr(0, comma));
    const std::int64_t y = std::stoll(flip.substr(comma + 1));
    const std::size_t idx = static_cast<std::size_t>(field.index(x, y));
    field.values[idx] = static_cast<std::int8_t>(-field.values[idx]);
  }
  const EnergyValue e = energy(cfg, field);
  std::string artifact;
  if (a.out.format == "csv") {
    artifact = "finite,value,broken_weak,broken_strong\n" +
               bool_digit(e.finite) + "," + format_number(e.value) + "," +
               format_number(e.broken_weak) + "," +
               format_number(e.broken_strong) + "\n";
  } else {
    artifact = energy_json(e) + "\n";
  }
  a.out.write(artifact,
              e.finite ? "energy " + format_number(e.value) + " (" +
                             format_number(e.broken_weak) + " weak broken)"
                       : "energy infinite (" +
                             format_number(e.broken_strong) +
                             " strong broken)");
}

struct GroundstateParams {
  double p = 0.0;
  std::int64_t n = 0;
  std::int64_t width = 0, height = 0, ox = 0, oy = 0;
  std::uint64_t seed = 0;
  double eps = 1.0;
  std::string bc = "halves";
  Output out;
};

void run_groundstate(const GroundstateParams& a) {
  std::int64_t width = a.width, height = a.height;
  if (a.n > 0) {
    if (a.width > 0 || a.height > 0) {
      throw std::invalid_argument("--n conflicts with --width/--height");
    }
    width = a.n;
    height = a.n;
  }
  const Window window = make_window(width, height, a.ox, a.oy);
  if (a.bc != "halves" && a.bc != "rows") {
    throw std::invalid_argument("--bc must be halves or rows");
  }
  const BondConfig cfg = BondConfig::sample(window, a.p, a.seed);
  const GroundState gs = ground_state(cfg, build_bc(a.bc, window, a.eps));
  std::string artifact;
  if (a.out.format == "json") {
    json j;
    j["energy"] = json::parse(energy_json(gs.energy));
    json grid = json::array();
    const std::string text = spin_grid(gs.field);
    std::size_t start = 0;
    while (start < text.size()) {
      const std::size_t end = text.find('\n', start);
      grid.push_back(text.substr(start, end - start));
      start = end + 1;
    }
    j["grid"] = std::move(grid);
    artifact = j.dump() + "\n";
  } else {
    artifact = spin_grid(gs.field) + energy_json(gs.energy) + "\n";
  }
  a.out.write(artifact,
              gs.energy.finite
                  ? "ground state energy " + format_number(gs.energy.value) +
                        " (" + format_number(gs.energy.broken_weak) +
                        " weak broken)"
                  : "ground state infinite (" +
                        format_number(gs.energy.broken_strong) +
                        " strong broken, " +
                        format_number(gs.energy.broken_weak) +
                        " weak broken)");
}

struct RigidityParams {
  double p = 0.0;
  std::int64_t n = 0;
  std::int64_t trials = 0;
  std::uint64_t seed = 0;
  int jobs = 1;
  Output out;
};

void run_rigidity(const RigidityParams& a) {
  const RigidityReport r = rigidity_probe(a.p, static_cast<int>(a.n), a.trials,
                                          a.seed, a.jobs);
  std::string artifact;
  if (a.out.format == "csv") {
    artifact = "p,n,trials,infinite_count,fraction\n" + format_number(r.p) +
               "," + format_number(r.n) + "," + format_number(r.trials) +
               "," + format_number(r.infinite_count) + "," +
               format_number(r.fraction) + "\n";
  } else {
    json j{{"p", r.p},
           {"n", r.n},
           {"trials", r.trials},
           {"infinite_count", r.infinite_count},
           {"fraction", r.fraction}};
    artifact = j.dump() + "\n";
  }
  a.out.write(artifact, "infinite fraction " + format_number(r.fraction) +
                            " (" + format_number(r.infinite_count) + "/" +
                            format_number(r.trials) + ")");
}

struct InterfaceParams {
  double p = 0.0;
  std::int64_t n = 0;
  std::int64_t trials = 0;
  std::uint64_t seed = 0;
  int jobs = 1;
  Output out;
};

void run_interface(const InterfaceParams& a) {
  const InterfaceReport r = interface_vs_lambda(a.p, static_cast<int>(a.n),
                                                a.trials, a.seed, a.jobs);
  std::string artifact;
  if (a.out.format == "csv") {
    artifact =
        "p,n,trials,used,discarded,mean_density,density_se,min_density,"
        "lambda_mean,lambda_se,drift,bound,within\n" +
        format_number(r.p) + "," + format_number(r.n) + "," +
        format_number(r.trials) + "," + format_number(r.used) + "," +
        format_number(r.discarded) + "," + format_number(r.mean_density) +
        "," + format_number(r.density_se) + "," +
        format_number(r.min_density) + "," + format_number(r.lambda_mean) +
        "," + format_number(r.lambda_se) + "," + format_number(r.drift) +
        "," + format_number(r.bound) + "," + bool_digit(r.within) + "\n";
  } else {
    json j{{"p", r.p},
           {"n", r.n},
           {"trials", r.trials},
           {"used", r.used},
           {"discarded", r.discarded},
           {"mean_density", json_number(r.mean_density)},
           {"density_se", json_number(r.density_se)},
           {"min_density", json_number(r.min_density)},
           {"lambda_mean", json_number(r.lambda_mean)},
           {"lambda_se", json_number(r.lambda_se)},
           {"drift", json_number(r.drift)},
           {"bound", json_number(r.bound)},
           {"within", r.within}};
    artifact = j.dump() + "\n";
  }
  a.out.write(artifact, "interface density " +
                            format_number(r.mean_density) + " vs lambda " +
                            format_number(r.lambda_mean) + ": drift " +
                            format_number(r.drift) +
                            (r.within ? " <= bound " : " exceeds bound ") +
                            format_number(r.bound));
}

void add_window_flags(CLI::App* cmd, std::int64_t* width, std::int64_t* height,
                      std::int64_t* ox, std::int64_t* oy) {
  cmd->add_option("--width", *width, "window width in vertices")->required();
  cmd->add_option("--height", *height, "window height in vertices")
      ->required();
  if (ox != nullptr) {
    cmd->add_option("--ox", *ox, "global x of the window origin");
    cmd->add_option("--oy", *oy, "global y of the window origin");
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "percspin: bond percolation, chemical distances, disjoint channels "
      "and rigid spin ground states on the square lattice"};
  app.require_subcommand(1);

  // sample
  auto sp = std::make_shared<SampleParams>();
  {
    CLI::App* cmd = app.add_subcommand("sample", "sample a bond configuration");
    cmd->add_option("--p", sp->p, "strong-bond probability")
        ->required()
        ->check(CLI::Range(0.0, 1.0));
    add_window_flags(cmd, &sp->width, &sp->height, &sp->ox, &sp->oy);
    cmd->add_option("--seed", sp->seed, "64-bit seed");
    add_output_flags(cmd, std::shared_ptr<Output>(sp, &sp->out));
    cmd->callback([sp] { run_sample(*sp); });
  }

  // clusters
  auto cp = std::make_shared<ClustersParams>();
  {
    CLI::App* cmd =
        app.add_subcommand("clusters", "label weak clusters of one sample");
    cmd->add_option("--p", cp->p, "strong-bond probability")
        ->required()
        ->check(CLI::Range(0.0, 1.0));
    add_window_flags(cmd, &cp->width, &cp->height, &cp->ox, &cp->oy);
    cmd->add_option("--seed", cp->seed, "64-bit seed");
    add_output_flags(cmd, std::shared_ptr<Output>(cp, &cp->out));
    cmd->callback([cp] { run_clusters(*cp); });
  }

  // crossing
  auto xp = std::make_shared<CrossingParams>();
  {
    CLI::App* cmd = app.add_subcommand(
        "crossing", "weak crossing frequency over repeated samples");
    cmd->add_option("--p", xp->p, "strong-bond probability")
        ->required()
        ->check(CLI::Range(0.0, 1.0));
    add_window_flags(cmd, &xp->width, &xp->height, nullptr, nullptr);
    cmd->add_option("--trials", xp->trials, "number of samples")->required();
    cmd->add_option("--seed", xp->seed, "64-bit seed");
    cmd->add_option("--direction", xp->direction, "lr or bt")
        ->check(CLI::IsMember({"lr", "bt"}))
        ->capture_default_str();
    cmd->add_option("--jobs", xp->jobs, "worker threads");
    add_output_flags(cmd, std::shared_ptr<Output>(xp, &xp->out));
    cmd->callback([xp] { run_crossing(*xp); });
  }

  // scan
  auto scp = std::make_shared<ScanParams>();
  {
    CLI::App* cmd = app.add_subcommand(
        "scan", "crossing frequency over a p grid (coupled seeds)");
    add_window_flags(cmd, &scp->width, &scp->height, nullptr, nullptr);
    cmd->add_option("--pmin", scp->pmin, "grid start")
        ->check(CLI::Range(0.0, 1.0))
        ->capture_default_str();
    cmd->add_option("--pmax", scp->pmax, "grid end")
        ->check(CLI::Range(0.0, 1.0))
        ->capture_default_str();
    cmd->add_option("--steps", scp->steps, "grid points")
        ->capture_default_str();
    cmd->add_option("--trials", scp->trials, "samples per grid point")
        ->required();
    cmd->add_option("--seed", scp->seed, "64-bit seed");
    cmd->add_option("--jobs", scp->jobs, "worker threads");
    add_output_flags(cmd, std::shared_ptr<Output>(scp, &scp->out));
    cmd->callback([scp] { run_scan(*scp); });
  }

  // distance
  auto dp = std::make_shared<DistanceParams>();
  {
    CLI::App* cmd = app.add_subcommand(
        "distance", "chemical distance between two dual points");
    cmd->add_option("--p", dp->p, "strong-bond probability")
        ->required()
        ->check(CLI::Range(0.0, 1.0));
    add_window_flags(cmd, &dp->width, &dp->height, &dp->ox, &dp->oy);
    cmd->add_option("--seed", dp->seed, "64-bit seed");
    cmd->add_option("--from", dp->from,
                    "doubled dual coordinates x2,y2 of the start")
        ->required()
        ->delimiter(',')
        ->expected(2);
    cmd->add_option("--to", dp->to,
                    "doubled dual coordinates x2,y2 of the goal")
        ->required()
        ->delimiter(',')
        ->expected(2);
    cmd->add_option("--path", dp->path_file,
                    "write the geodesic midpoints as CSV");
    add_output_flags(cmd, std::shared_ptr<Output>(dp, &dp->out));
    cmd->callback([dp] { run_distance(*dp); });
  }

  // lambda
  auto lp = std::make_shared<LambdaParams>();
  {
    CLI::App* cmd = app.add_subcommand(
        "lambda", "chemical-distance time constant estimate");
    cmd->add_option("--p", lp->p, "strong-bond probability")
        ->required()
        ->check(CLI::Range(0.0, 1.0));
    cmd->add_option("--tau", lp->tau, "direction x,y")
        ->required()
        ->delimiter(',')
        ->expected(2);
    cmd->add_option("--m", lp->m, "scale")->required();
    cmd->add_option("--trials", lp->trials, "Monte Carlo trials")->required();
    cmd->add_option("--seed", lp->seed, "64-bit seed");
    cmd->add_option("--jobs", lp->jobs, "worker threads");
    cmd->add_flag("--refine", lp->refine,
                  "also run scale 2m and report the 1/m extrapolation");
    add_output_flags(cmd, std::shared_ptr<Output>(lp, &lp->out));
    cmd->callback([lp] { run_lambda(*lp); });
  }

  // phi
  auto pp = std::make_shared<PhiParams>();
  {
    CLI::App* cmd = app.add_subcommand(
        "phi", "weighted passage-time surface tension estimate");
    cmd->add_option("--p", pp->p, "strong-bond probability")
        ->required()
        ->check(CLI::Range(0.0, 1.0));
    cmd->add_option("--beta", pp->beta, "finite strong-bond weight (>= 1)")
        ->required();
    cmd->add_option("--nu", pp->nu, "normal direction x,y")
        ->required()
        ->delimiter(',')
        ->expected(2);
    cmd->add_option("--m", pp->m, "scale")->required();
    cmd->add_option("--trials", pp->trials, "Monte Carlo trials")->required();
    cmd->add_option("--seed", pp->seed, "64-bit seed");
    cmd->add_option("--jobs", pp->jobs, "worker threads");
    cmd->add_flag("--refine", pp->refine,
                  "also run scale 2m and report the 1/m extrapolation");
    add_output_flags(cmd, std::shared_ptr<Output>(pp, &pp->out));
    cmd->callback([pp] { run_phi(*pp); });
  }

  // sweep
  auto swp = std::make_shared<SweepParams>();
  {
    CLI::App* cmd = app.add_subcommand(
        "sweep", "phi over a beta grid plus the lambda reference");
    cmd->add_option("--p", swp->p, "strong-bond probability")
        ->required()
        ->check(CLI::Range(0.0, 1.0));
    cmd->add_option("--nu", swp->nu, "normal direction x,y")
        ->required()
        ->delimiter(',')
        ->expected(2);
    cmd->add_option("--m", swp->m, "scale")->required();
    cmd->add_option("--betas", swp->betas, "ascending beta grid")
        ->required()
        ->delimiter(',');
    cmd->add_option("--trials", swp->trials, "Monte Carlo trials")->required();
    cmd->add_option("--seed", swp->seed, "64-bit seed");
    cmd->add_option("--jobs", swp->jobs, "worker threads");
    add_output_flags(cmd, std::shared_ptr<Output>(swp, &swp->out));
    cmd->callback([swp] { run_sweep(*swp); });
  }

  // channels / strongchannels / percentage
  const auto add_rect_flags = [](CLI::App* cmd, ChannelsParams* a) {
    cmd->add_option("--p", a->p, "strong-bond probability")
        ->required()
        ->check(CLI::Range(0.0, 1.0));
    cmd->add_option("--nu", a->nu, "integer normal direction x,y")
        ->required()
        ->delimiter(',')
        ->expected(2);
    cmd->add_option("--delta", a->delta, "aspect ratio in (0,1]")
        ->capture_default_str();
    cmd->add_option("--n", a->scale, "rectangle scale N")->required();
    cmd->add_option("--center", a->center, "rectangle center x,y")
        ->delimiter(',')
        ->expected(2)
        ->capture_default_str();
    cmd->add_option("--seed", a->seed, "64-bit seed");
  };

  auto chp = std::make_shared<ChannelsParams>();
  {
    CLI::App* cmd = app.add_subcommand(
        "channels", "maximal bond-disjoint weak channel count");
    add_rect_flags(cmd, chp.get());
    add_output_flags(cmd, std::shared_ptr<Output>(chp, &chp->out));
    cmd->callback([chp] { run_channels(*chp); });
  }

  auto shp = std::make_shared<ChannelsParams>();
  {
    CLI::App* cmd = app.add_subcommand(
        "strongchannels",
        "maximal strong channel count on the shifted lattice");
    add_rect_flags(cmd, shp.get());
    add_output_flags(cmd, std::shared_ptr<Output>(shp, &shp->out));
    cmd->callback([shp] { run_strongchannels(*shp); });
  }

  auto pcp = std::make_shared<PercentageParams>();
  {
    CLI::App* cmd = app.add_subcommand(
        "percentage", "minimal strong links over budgeted channels");
    add_rect_flags(cmd, &pcp->base);
    cmd->add_option("--budget", pcp->budget, "maximal channel length")
        ->required();
    add_output_flags(cmd, std::shared_ptr<Output>(pcp, &pcp->base.out));
    cmd->callback([pcp] { run_percentage(*pcp); });
  }

  // energy
  auto ep = std::make_shared<EnergyParams>();
  {
    CLI::App* cmd =
        app.add_subcommand("energy", "evaluate the energy of a spin field");
    cmd->add_option("--p", ep->p, "strong-bond probability")
        ->required()
        ->check(CLI::Range(0.0, 1.0));
    add_window_flags(cmd, &ep->width, &ep->height, &ep->ox, &ep->oy);
    cmd->add_option("--seed", ep->seed, "64-bit seed");
    cmd->add_option("--eps", ep->eps, "lattice spacing")
        ->capture_default_str();
    cmd->add_option("--bc", ep->bc, "uniform, halves or rows")
        ->check(CLI::IsMember({"uniform", "halves", "rows"}))
        ->capture_default_str();
    cmd->add_option("--flip", ep->flips,
                    "flip the spin at global vertex x,y (repeatable)");
    add_output_flags(cmd, std::shared_ptr<Output>(ep, &ep->out));
    cmd->callback([ep] { run_energy(*ep); });
  }

  // groundstate
  auto gp = std::make_shared<GroundstateParams>();
  {
    CLI::App* cmd = app.add_subcommand(
        "groundstate", "minimum-cut ground state under frozen boundary data");
    cmd->add_option("--p", gp->p, "strong-bond probability")
        ->required()
        ->check(CLI::Range(0.0, 1.0));
    cmd->add_option("--n", gp->n, "square window side (vertices)");
    cmd->add_option("--width", gp->width, "window width in vertices");
    cmd->add_option("--height", gp->height, "window height in vertices");
    cmd->add_option("--ox", gp->ox, "global x of the window origin");
    cmd->add_option("--oy", gp->oy, "global y of the window origin");
    cmd->add_option("--seed", gp->seed, "64-bit seed");
    cmd->add_option("--eps", gp->eps, "lattice spacing")
        ->capture_default_str();
    cmd->add_option("--bc", gp->bc, "halves or rows")
        ->check(CLI::IsMember({"halves", "rows"}))
        ->capture_default_str();
    add_output_flags(cmd, std::shared_ptr<Output>(gp, &gp->out));
    cmd->callback([gp] { run_groundstate(*gp); });
  }

  // rigidity
  auto rp = std::make_shared<RigidityParams>();
  {
    CLI::App* cmd = app.add_subcommand(
        "rigidity", "infinite-energy frequency for mixed boundary data");
    cmd->add_option("--p", rp->p, "strong-bond probability")
        ->required()
        ->check(CLI::Range(0.0, 1.0));
    cmd->add_option("--n", rp->n, "square window side (vertices)")
        ->required();
    cmd->add_option("--trials", rp->trials, "number of samples")->required();
    cmd->add_option("--seed", rp->seed, "64-bit seed");
    cmd->add_option("--jobs", rp->jobs, "worker threads");
    add_output_flags(cmd, std::shared_ptr<Output>(rp, &rp->out));
    cmd->callback([rp] { run_rigidity(*rp); });
  }

  // interface
  auto ip = std::make_shared<InterfaceParams>();
  {
    CLI::App* cmd = app.add_subcommand(
        "interface",
        "ground-state interface density against the time constant");
    cmd->add_option("--p", ip->p, "strong-bond probability")
        ->required()
        ->check(CLI::Range(0.0, 1.0));
    cmd->add_option("--n", ip->n, "square window side (vertices)")
        ->required();
    cmd->add_option("--trials", ip->trials, "number of samples")->required();
    cmd->add_option("--seed", ip->seed, "64-bit seed");
    cmd->add_option("--jobs", ip->jobs, "worker threads");
    add_output_flags(cmd, std::shared_ptr<Output>(ip, &ip->out));
    cmd->callback([ip] { run_interface(*ip); });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::out_of_range& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  }
  return 0;
}
