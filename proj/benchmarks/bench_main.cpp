#include <benchmark/benchmark.h>

#include "curvhom/curvature.hpp"
#include "curvhom/geodesics.hpp"
#include "curvhom/homogeneity.hpp"
#include "curvhom/random.hpp"

using namespace curvhom;

namespace {

FamilySpec family(int kind, int size) {
  return symmetric_family(static_cast<FamilyKind>(kind), size);
}

Vector point(int n, std::uint64_t seed) {
  Rng rng = substream(seed, 0);
  return uniform_vector(rng, n, -0.5, 0.5);
}

FamilySpec quartic_family1(int p) {
  std::vector<Monomial> terms;
  for (int i = 0; i < p; ++i) {
    std::vector<int> sq(static_cast<std::size_t>(p), 0), q(static_cast<std::size_t>(p), 0);
    sq[static_cast<std::size_t>(i)] = 2;
    q[static_cast<std::size_t>(i)] = 4;
    terms.push_back({sq, 1.0});
    terms.push_back({q, 0.1});
  }
  return FamilySpec::family1(p, MultiProfile::polynomial(p, std::move(terms)));
}

void BM_CurvaturePackage(benchmark::State& state) {
  const auto spec = family(static_cast<int>(state.range(0)), static_cast<int>(state.range(1)));
  const int depth = static_cast<int>(state.range(2));
  const Vector P = point(spec.dim(), 1);
  for (auto _ : state) benchmark::DoNotOptimize(curvature_package(spec, P, depth));
}
BENCHMARK(BM_CurvaturePackage)
    ->ArgNames({"family", "size", "depth"})
    ->Args({1, 2, 1})
    ->Args({1, 3, 1})
    ->Args({2, 2, 1})
    ->Args({2, 3, 1})
    ->Args({3, 2, 2})
    ->Args({3, 3, 2})
    ->Unit(benchmark::kMicrosecond);

void BM_GeodesicRecursive(benchmark::State& state) {
  const auto spec = family(static_cast<int>(state.range(0)), 3);
  const Vector P = point(spec.dim(), 2), v = point(spec.dim(), 3);
  const double t_max = static_cast<double>(state.range(1));
  for (auto _ : state) benchmark::DoNotOptimize(integrate_recursive(spec, P, v, t_max));
}
BENCHMARK(BM_GeodesicRecursive)
    ->ArgNames({"family", "t_max"})
    ->ArgsProduct({{1, 2, 3}, {1, 10}})
    ->Unit(benchmark::kMillisecond);

void BM_GeodesicRK4(benchmark::State& state) {
  const auto spec = family(static_cast<int>(state.range(0)), 3);
  const Vector P = point(spec.dim(), 2), v = point(spec.dim(), 3);
  for (auto _ : state) benchmark::DoNotOptimize(integrate_rk4(spec, P, v, 10.0, 0.02));
}
BENCHMARK(BM_GeodesicRK4)->ArgName("family")->DenseRange(1, 3)->Unit(benchmark::kMillisecond);

void BM_Alpha1(benchmark::State& state) {
  const int p = static_cast<int>(state.range(0));
  const auto spec = quartic_family1(p);
  const Vector P = point(2 * p, 4);
  for (auto _ : state) benchmark::DoNotOptimize(alpha1(spec, P));
}
BENCHMARK(BM_Alpha1)->ArgName("p")->DenseRange(2, 4)->Unit(benchmark::kMicrosecond);

void BM_Alpha1BruteForce(benchmark::State& state) {
  const int p = static_cast<int>(state.range(0));
  const auto spec = quartic_family1(p);
  const Vector P = point(2 * p, 4);
  for (auto _ : state) benchmark::DoNotOptimize(alpha1_bruteforce(spec, P));
}
BENCHMARK(BM_Alpha1BruteForce)->ArgName("p")->DenseRange(2, 4)->Unit(benchmark::kMicrosecond);

}  // namespace

BENCHMARK_MAIN();
