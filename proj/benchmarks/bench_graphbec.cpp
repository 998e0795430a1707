#include <benchmark/benchmark.h>

#include <cmath>
#include <vector>

#include "graphbec/graph.hpp"
#include "graphbec/spectral.hpp"
#include "graphbec/statistics.hpp"
#include "graphbec/thermo_limit.hpp"
#include "graphbec/tonks.hpp"
#include "graphbec/vertex_conditions.hpp"

using namespace graphbec;

namespace {

VertexConditions attractive_centre(const MetricGraph& g) {
  std::vector<double> alphas(g.vertex_count(), 0.0);
  alphas[0] = -3.0;
  return preset_delta(g, alphas);
}

void BM_SecularValue(benchmark::State& state) {
  const MetricGraph g = graphs::equilateral_star(static_cast<std::size_t>(state.range(0)), 1.0);
  const VertexConditions vc = preset_kirchhoff(g);
  double k = 1.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(secular_value(g, vc, SpectralPoint::oscillatory(k)));
    k += 1e-3;
  }
}
BENCHMARK(BM_SecularValue)->Arg(3)->Arg(8)->Arg(32);

void BM_PositiveSpectrum(benchmark::State& state) {
  const MetricGraph g = graphs::equilateral_star(3, static_cast<double>(state.range(0)));
  const VertexConditions vc = preset_kirchhoff(g);
  for (auto _ : state) benchmark::DoNotOptimize(positive_spectrum(g, vc, 40.0));
}
BENCHMARK(BM_PositiveSpectrum)->Arg(10)->Arg(40)->Arg(160)->Unit(benchmark::kMillisecond);

void BM_NegativeSpectrum(benchmark::State& state) {
  const MetricGraph g = graphs::equilateral_star(3, static_cast<double>(state.range(0)));
  const VertexConditions vc = attractive_centre(g);
  for (auto _ : state) benchmark::DoNotOptimize(negative_spectrum(g, vc));
}
BENCHMARK(BM_NegativeSpectrum)->Arg(1)->Arg(16)->Unit(benchmark::kMicrosecond);

void BM_ChemicalPotential(benchmark::State& state) {
  const MetricGraph g = graphs::equilateral_star(3, 160.0);
  const Spectrum s = thermal_spectrum(SecularSystem(g, preset_kirchhoff(g)), 1.0);
  for (auto _ : state) benchmark::DoNotOptimize(solve_chemical_potential(s, 1.0, 1.0));
}
BENCHMARK(BM_ChemicalPotential)->Unit(benchmark::kMicrosecond);

void BM_CanonicalPartitions(benchmark::State& state) {
  std::vector<double> energies;
  for (int n = 1; n <= 200; ++n) energies.push_back(std::pow(0.05 * n, 2));
  const auto levels = as_levels(energies);
  const auto n_max = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(canonical_partitions(levels, n_max, 1.0));
}
BENCHMARK(BM_CanonicalPartitions)->Arg(16)->Arg(128)->Arg(512)->Unit(benchmark::kMicrosecond);

void BM_LimitFreeEnergy(benchmark::State& state) {
  const double beta = static_cast<double>(state.range(0));
  double mu = -2.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(limit_free_energy_density(beta, mu));
    mu = mu > 2.0 ? -2.0 : mu + 0.01;
  }
}
BENCHMARK(BM_LimitFreeEnergy)->Arg(1)->Arg(8)->Unit(benchmark::kMicrosecond);

}  // namespace

BENCHMARK_MAIN();
