#include <cmath>
#include <vector>

#include <benchmark/benchmark.h>

#include "entland/bounds.hpp"
#include "entland/density.hpp"
#include "entland/discrete.hpp"
#include "entland/landscape.hpp"
#include "entland/sources.hpp"

namespace {

entland::SourceModel two_point_model(double sigma) {
  using entland::SourceSpec;
  return entland::SourceModel(
      {SourceSpec::discrete({-2.0 / std::sqrt(3.0), std::sqrt(3.0) / 2.0}, {1.0 / 3.0, 2.0 / 3.0},
                            sigma),
       SourceSpec::discrete({-std::sqrt(2.0), std::sqrt(2.0) / 2.0}, {3.0 / 7.0, 4.0 / 7.0},
                            sigma)},
      entland::VarianceMode::as_given, false);
}

void BM_EntropyQuadrature(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  std::vector<double> w(n, 1.0 / n), mu(n), s(n, 0.3);
  for (int i = 0; i < n; ++i) mu[i] = 0.7 * i;
  const entland::MixtureDensity m(w, mu, s);
  for (auto _ : state) benchmark::DoNotOptimize(entland::entropy_quadrature(m));
}
BENCHMARK(BM_EntropyQuadrature)->Arg(2)->Arg(8)->Arg(32);

void BM_EntropyBounds(benchmark::State& state) {
  const entland::MixtureDensity m({0.2, 0.3, 0.5}, {0, 1, 2}, {0.3, 0.3, 0.3});
  const auto q = entland::default_quadrature(m);
  for (auto _ : state) benchmark::DoNotOptimize(entland::entropy_bounds(m, q));
}
BENCHMARK(BM_EntropyBounds);

void BM_ScanPoint(benchmark::State& state) {
  const auto model = two_point_model(0.1);
  for (auto _ : state) benchmark::DoNotOptimize(entland::evaluate_theta(model, 0.81));
}
BENCHMARK(BM_ScanPoint);

void BM_UniformGaussianPoint(benchmark::State& state) {
  const entland::SourceModel model({entland::SourceSpec::uniform(), entland::SourceSpec::gaussian()});
  for (auto _ : state) benchmark::DoNotOptimize(entland::evaluate_theta(model, 0.3));
}
BENCHMARK(BM_UniformGaussianPoint);

void BM_Candidates2d(benchmark::State& state) {
  const int r = static_cast<int>(state.range(0));
  entland::Marginal a, b;
  for (int i = 0; i < r; ++i) {
    a.values.push_back(i);
    a.probs.push_back(1.0 / r);
    b.values.push_back(std::sqrt(2.0) * i);
    b.probs.push_back(1.0 / r);
  }
  const auto u = entland::product_distribution({a, b});
  for (auto _ : state) benchmark::DoNotOptimize(entland::candidate_directions_2d(u));
}
BENCHMARK(BM_Candidates2d)->Arg(3)->Arg(6)->Arg(10);

void BM_ParzenEntropy(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  std::vector<double> v(n);
  for (std::size_t i = 0; i < n; ++i) v[i] = std::sin(1.3 * static_cast<double>(i));
  const entland::SampleSet s(v);
  for (auto _ : state) benchmark::DoNotOptimize(entland::parzen_entropy(s));
}
BENCHMARK(BM_ParzenEntropy)->Arg(100)->Arg(1000);

}  // namespace

BENCHMARK_MAIN();
