// Copyright 2026 The greenqfi Authors
// SPDX-License-Identifier: Apache-2.0

#include "greenqfi/bounds.hpp"

#include <benchmark/benchmark.h>

#include <numbers>

using namespace greenqfi;

namespace {

ModelParams ring(int n, double u) {
  ModelParams p;
  p.n_sites = n;
  p.u = u;
  return p;
}

void BM_SolveModel(benchmark::State& state) {
  const auto p = ring(static_cast<int>(state.range(0)), 4.0);
  for (auto _ : state) benchmark::DoNotOptimize(solve_tu_model(p));
}
BENCHMARK(BM_SolveModel)->Arg(6)->Arg(8)->Unit(benchmark::kMillisecond);

void BM_MomentumPoles(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const auto eigs = solve_tu_model(ring(n, 4.0));
  const auto w = thermal_weights(eigs, 1.0, 4.0);
  for (auto _ : state) benchmark::DoNotOptimize(spectral_poles_momentum(eigs, w, Boundary::periodic));
}
BENCHMARK(BM_MomentumPoles)->Arg(6)->Arg(8)->Unit(benchmark::kMillisecond);

void BM_ThermalQfiFromPoles(benchmark::State& state) {
  const auto eigs = solve_tu_model(ring(8, 4.0));
  const auto m = spectral_poles_momentum(eigs, thermal_weights(eigs, 1.0, 4.0), Boundary::periodic);
  for (auto _ : state) benchmark::DoNotOptimize(qfi_thermal_from_spectra(m, std::numbers::pi));
}
BENCHMARK(BM_ThermalQfiFromPoles)->Unit(benchmark::kMillisecond);

void BM_ThermalQfiBinned(benchmark::State& state) {
  const auto eigs = solve_tu_model(ring(8, 4.0));
  const auto m = spectral_poles_momentum(eigs, thermal_weights(eigs, 1.0, 4.0), Boundary::periodic);
  const auto b = bin_spectrum(m, 0.1);
  for (auto _ : state) benchmark::DoNotOptimize(qfi_thermal_from_spectra(b, std::numbers::pi));
}
BENCHMARK(BM_ThermalQfiBinned)->Unit(benchmark::kMillisecond);

void BM_GroundStateCurve(benchmark::State& state) {
  const SectorBasis sector(8, 4);
  const auto gs = ground_state(ring(8, 8.0), sector);
  const auto data = correlation_data(gs.state, sector);
  const auto ks = k_grid(64);
  for (auto _ : state) benchmark::DoNotOptimize(qfi_curve(data, ks));
}
BENCHMARK(BM_GroundStateCurve);

void BM_ObjectiveGradient(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const QfiObjective obj(block_space(n, SymmetryClass::den, n / 2), witness_from_k(1.0, n));
  Eigen::VectorXcd psi = Eigen::VectorXcd::Constant(static_cast<Eigen::Index>(obj.space().size()), 1.0);
  psi.normalize();
  Eigen::VectorXcd g(psi.size());
  for (auto _ : state) benchmark::DoNotOptimize(obj.value_and_gradient(psi, g));
}
BENCHMARK(BM_ObjectiveGradient)->Arg(4)->Arg(6)->Arg(8);

void BM_BlockMaximum(benchmark::State& state) {
  OptimizerConfig cfg;
  cfg.restarts = 8;
  const int n = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(max_block_qfi(n, 1.0, SymmetryClass::den, cfg));
}
BENCHMARK(BM_BlockMaximum)->Arg(4)->Arg(6)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
