// Copyright 2026 The Nearfield Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <benchmark/benchmark.h>

#include <random>

#include <nearfield/baselines.hpp>
#include <nearfield/sadce.hpp>

namespace {

using namespace nearfield;

ReceivedBlock noisy_block(const ArrayGeometry& g, double snr_db) {
  const CVector h = synthesize_channel(g, {0.17, -0.23, 5.0, {1.0, 0.0}}, ChannelModel::fresnel);
  return transmit(h, generate_pilots(1, 1.0, PilotKind::all_ones), noise_power_from_snr(snr_db), 3);
}

void BM_SadceAnalytic(benchmark::State& state) {
  const int side = static_cast<int>(state.range(0));
  const ArrayGeometry g(side, side, 0.03);
  const auto block = noisy_block(g, 20.0);
  for (auto _ : state) benchmark::DoNotOptimize(sadce_estimate(block, g));
  state.SetComplexityN(static_cast<benchmark::IterationCount>(g.element_count()));
}
BENCHMARK(BM_SadceAnalytic)->Arg(9)->Arg(21)->Arg(41)->Unit(benchmark::kMillisecond)->Complexity();

void BM_SadceDense(benchmark::State& state) {
  const int side = static_cast<int>(state.range(0));
  const ArrayGeometry g(side, side, 0.03);
  const auto block = noisy_block(g, 20.0);
  SadceOptions opts;
  opts.solver = TSolver::dense;
  for (auto _ : state) benchmark::DoNotOptimize(sadce_estimate(block, g, opts));
}
BENCHMARK(BM_SadceDense)->Arg(9)->Arg(21)->Unit(benchmark::kMillisecond);

void BM_Dft2(benchmark::State& state) {
  const auto n = state.range(0);
  Rng rng = make_stream(1, {});
  std::normal_distribution<double> d(0.0, 1.0);
  CMatrix x(n, n);
  for (Eigen::Index i = 0; i < x.size(); ++i) x(i) = {d(rng), d(rng)};
  for (auto _ : state) benchmark::DoNotOptimize(dft2(x));
}
BENCHMARK(BM_Dft2)->Arg(9)->Arg(41)->Arg(101);

void BM_RefineAngles(benchmark::State& state) {
  const int side = static_cast<int>(state.range(0));
  const ArrayGeometry g(side, side, 0.03);
  const CVector h = ls_channel_estimate(noisy_block(g, 20.0)).ls_channel;
  const CMatrix ra = build_anti_diagonal(h, g).values;
  const SpectralPeak peak = find_peak(dft2(ra));
  for (auto _ : state) benchmark::DoNotOptimize(refine_angles(ra, peak, g));
}
BENCHMARK(BM_RefineAngles)->Arg(9)->Arg(41)->Unit(benchmark::kMillisecond);

void BM_MusicSearch(benchmark::State& state) {
  const ArrayGeometry g(9, 9, 1.0);
  const CVector h = ls_channel_estimate(noisy_block(g, 30.0)).ls_channel;
  GridSpec grid;
  grid.u.points = 51;
  grid.v.points = 51;
  grid.r.points = 48;
  for (auto _ : state) benchmark::DoNotOptimize(music3d_search(h, grid, g));
}
BENCHMARK(BM_MusicSearch)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
