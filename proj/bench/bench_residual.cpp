// Serial reference vs OpenMP residual on the heavily warped 3D mesh.
#include <benchmark/benchmark.h>

#include "frcurv/schemes.hpp"

#include <cmath>
#include <map>
#include <memory>

namespace {

const frc::Discretization& disc(int n, int p) {
  static std::map<std::pair<int, int>, std::unique_ptr<frc::Discretization>> cache;
  auto& d = cache[{n, p}];
  if (!d)
    d = std::make_unique<frc::Discretization>(frc::Mesh::build(3, n, p, frc::Warp::Heavy3D),
                                              frc::DiscretizationOptions{p, p + 1});
  return *d;
}

Eigen::VectorXd field(const frc::Discretization& d) {
  return d.project([](const frc::Point& x) { return std::sin(x[0]) * std::cos(2 * x[1]) + x[2]; });
}

const frc::SchemeConfig kCfg{frc::SchemeForm::ESFRSplit, 0.0, frc::FluxKind::Upwind, {1.0, 0.5, 0.25}};

void BM_reference(benchmark::State& st) {
  const auto& d = disc(st.range(0), st.range(1));
  const Eigen::VectorXd u = field(d);
  for (auto _ : st) benchmark::DoNotOptimize(frc::residual_reference(d, kCfg, u));
}

void BM_serial(benchmark::State& st) {
  const auto& d = disc(st.range(0), st.range(1));
  const Eigen::VectorXd u = field(d);
  for (auto _ : st) benchmark::DoNotOptimize(frc::residual(d, kCfg, u, frc::Execution::Serial));
}

void BM_parallel(benchmark::State& st) {
  const auto& d = disc(st.range(0), st.range(1));
  const Eigen::VectorXd u = field(d);
  for (auto _ : st) benchmark::DoNotOptimize(frc::residual(d, kCfg, u, frc::Execution::Parallel));
}

}  // namespace

BENCHMARK(BM_reference)->Args({4, 3})->Args({8, 2});
BENCHMARK(BM_serial)->Args({4, 3})->Args({8, 2});
BENCHMARK(BM_parallel)->Args({4, 3})->Args({8, 2});
BENCHMARK_MAIN();
