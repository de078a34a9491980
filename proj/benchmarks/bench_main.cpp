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

#include <benchmark/benchmark.h>

#include <cstdint>

#include "percspin/channels.hpp"
#include "percspin/clusters.hpp"
#include "percspin/distance.hpp"
#include "percspin/lattice.hpp"
#include "percspin/spin.hpp"

namespace {

using namespace percspin;

Window square(std::int64_t n) {
  return Window{static_cast<int>(n), static_cast<int>(n), 0, 0};
}

void BM_SampleConfig(benchmark::State& state) {
  const Window w = square(state.range(0));
  std::uint64_t seed = 1;
  for (auto _ : state) {
    benchmark::DoNotOptimize(BondConfig::sample(w, 0.5, seed++));
  }
  state.SetItemsProcessed(state.iterations() * w.bond_count());
}
BENCHMARK(BM_SampleConfig)->Arg(64)->Arg(256);

void BM_WeakClusters(benchmark::State& state) {
  const Window w = square(state.range(0));
  const BondConfig cfg = BondConfig::sample(w, 0.5, 2);
  for (auto _ : state) {
    benchmark::DoNotOptimize(weak_clusters(cfg));
  }
  state.SetItemsProcessed(state.iterations() * w.bond_count());
}
BENCHMARK(BM_WeakClusters)->Arg(64)->Arg(256);

void BM_ChemicalDistance(benchmark::State& state) {
  const std::int64_t n = state.range(0);
  const Window w = square(n);
  const BondConfig cfg = BondConfig::sample(w, 0.2, 3);
  const DualPoint from{1, 0};
  const DualPoint to{2 * (n - 2) + 1, 2 * (n - 2)};
  for (auto _ : state) {
    benchmark::DoNotOptimize(chemical_distance(cfg, from, to));
  }
}
BENCHMARK(BM_ChemicalDistance)->Arg(64)->Arg(128);

void BM_PassageTime(benchmark::State& state) {
  const std::int64_t n = state.range(0);
  const Window w = square(n);
  const BondConfig cfg = BondConfig::sample(w, 0.3, 4);
  const Beta beta = Beta::finite(8.0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        passage_time(cfg, beta, Vertex{0, 0}, Vertex{n - 1, n - 1}));
  }
}
BENCHMARK(BM_PassageTime)->Arg(64)->Arg(128);

void BM_DisjointChannels(benchmark::State& state) {
  const double scale = static_cast<double>(state.range(0));
  const RectangleSpec rect = RectangleSpec::make(0, 0, 0, -1, 1.0, scale);
  const BondConfig cfg = BondConfig::sample(rect.bounding_window(), 0.2, 5);
  for (auto _ : state) {
    benchmark::DoNotOptimize(count_disjoint_channels(cfg, rect));
  }
}
BENCHMARK(BM_DisjointChannels)->Arg(32)->Arg(64);

void BM_GroundState(benchmark::State& state) {
  const std::int64_t n = state.range(0);
  const Window w = square(n);
  const BondConfig cfg = BondConfig::sample(w, 0.2, 6);
  const SpinField bc = boundary_halves(w);
  for (auto _ : state) {
    benchmark::DoNotOptimize(ground_state(cfg, bc));
  }
}
BENCHMARK(BM_GroundState)->Arg(32)->Arg(64);

}  // namespace

BENCHMARK_MAIN();
