// Serial reference against the OpenMP path for the hot kernels.
#include <benchmark/benchmark.h>

#include <random>

#include "torsionshape/domain.hpp"
#include "torsionshape/kernels.hpp"

using namespace tshape;
using kernels::Exec;

namespace {

std::vector<double> random_vector(std::size_t n, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<double> v(n);
  for (auto& x : v) x = u(rng);
  return v;
}

kernels::StencilOperator laplacian(int n) {
  kernels::StencilOperator op;
  op.off = 1.0;
  op.diag.assign(static_cast<std::size_t>(n) * n, 4.0);
  op.neighbours.resize(op.diag.size());
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) {
      auto& nb = op.neighbours[static_cast<std::size_t>(j) * n + i];
      nb = {i > 0 ? j * n + i - 1 : -1, i + 1 < n ? j * n + i + 1 : -1, j > 0 ? (j - 1) * n + i : -1,
            j + 1 < n ? (j + 1) * n + i : -1};
    }
  }
  return op;
}

Exec exec_of(const benchmark::State& s) { return s.range(1) ? Exec::Parallel : Exec::Serial; }

void BM_Dot(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto a = random_vector(n, 1), b = random_vector(n, 2);
  for (auto _ : state) benchmark::DoNotOptimize(kernels::dot(a, b, exec_of(state)));
}

void BM_Axpy(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto x = random_vector(n, 1);
  auto y = random_vector(n, 2);
  for (auto _ : state) {
    kernels::axpy(1e-9, x, y, exec_of(state));
    benchmark::ClobberMemory();
  }
}

void BM_Apply(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const auto op = laplacian(n);
  const auto x = random_vector(op.size(), 3);
  std::vector<double> y(op.size());
  for (auto _ : state) {
    kernels::apply(op, x, y, exec_of(state));
    benchmark::ClobberMemory();
  }
}

void BM_Advect(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const GridSpec g = GridSpec::square(n, 2.0);
  const Domain d = build_domain(g, seeds::ball({}, 1.0));
  const auto speed = random_vector(g.node_count(), 4);
  const std::vector<unsigned char> active(g.node_count(), 1);
  NodeField out(g);
  for (auto _ : state) {
    kernels::advect_upwind(g, d.ls().values(), speed, active, 1e-3, out.values(), exec_of(state));
    benchmark::ClobberMemory();
  }
}

// Quadrature has no Exec argument; the serial run pins the team to one thread.
void BM_Quadrature(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const Domain d = build_domain(GridSpec::square(n, 2.0), seeds::ellipse({}, 1.3, 0.8));
  kernels::set_max_threads(state.range(1) ? 0 : 1);
  for (auto _ : state) {
    benchmark::DoNotOptimize(integrate(d, [](Vec2 p) { return p.x * p.x + p.y * p.y; }));
  }
  kernels::set_max_threads(0);
}

}  // namespace

BENCHMARK(BM_Dot)->ArgsProduct({{1 << 16, 1 << 20}, {0, 1}});
BENCHMARK(BM_Axpy)->ArgsProduct({{1 << 16, 1 << 20}, {0, 1}});
BENCHMARK(BM_Apply)->ArgsProduct({{256, 1024}, {0, 1}});
BENCHMARK(BM_Advect)->ArgsProduct({{256, 1024}, {0, 1}});
BENCHMARK(BM_Quadrature)->ArgsProduct({{256, 512}, {0, 1}});

BENCHMARK_MAIN();
