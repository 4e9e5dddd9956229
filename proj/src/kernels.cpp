#include "torsionshape/kernels.hpp"

#include <algorithm>
#include <cmath>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace tshape::kernels {

namespace {

int g_default_threads = 0;

std::size_t block_count(std::size_t n) { return (n + kReductionBlock - 1) / kReductionBlock; }

}  // namespace

void set_max_threads(int n) {
#ifdef _OPENMP
  if (g_default_threads == 0) g_default_threads = omp_get_max_threads();
  omp_set_num_threads(n > 0 ? n : g_default_threads);
#else
  (void)n;
#endif
}

int max_threads() {
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

double dot(std::span<const double> a, std::span<const double> b, Exec exec) {
  const std::size_t n = a.size();
  const std::size_t nb = block_count(n);
  std::vector<double> partial(nb, 0.0);
  auto block = [&](std::size_t k) {
    const std::size_t lo = k * kReductionBlock, hi = std::min(n, lo + kReductionBlock);
    double s = 0.0;
    for (std::size_t i = lo; i < hi; ++i) s += a[i] * b[i];
    partial[k] = s;
  };
  if (exec == Exec::Parallel) {
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t k = 0; k < static_cast<std::ptrdiff_t>(nb); ++k) block(static_cast<std::size_t>(k));
  } else {
    for (std::size_t k = 0; k < nb; ++k) block(k);
  }
  double total = 0.0;
  for (double p : partial) total += p;
  return total;
}

void axpy(double a, std::span<const double> x, std::span<double> y, Exec exec) {
  const auto n = static_cast<std::ptrdiff_t>(x.size());
  if (exec == Exec::Parallel) {
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t i = 0; i < n; ++i) y[i] += a * x[i];
  } else {
    for (std::ptrdiff_t i = 0; i < n; ++i) y[i] += a * x[i];
  }
}

void xpay(std::span<const double> x, double a, std::span<double> y, Exec exec) {
  const auto n = static_cast<std::ptrdiff_t>(x.size());
  if (exec == Exec::Parallel) {
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t i = 0; i < n; ++i) y[i] = x[i] + a * y[i];
  } else {
    for (std::ptrdiff_t i = 0; i < n; ++i) y[i] = x[i] + a * y[i];
  }
}

void apply(const StencilOperator& op, std::span<const double> x, std::span<double> y, Exec exec) {
  const auto n = static_cast<std::ptrdiff_t>(op.size());
  auto row = [&](std::ptrdiff_t r) {
    double s = 0.0;
    for (int nb : op.neighbours[r])
      if (nb >= 0) s += x[nb];
    y[r] = op.diag[r] * x[r] - op.off * s;
  };
  if (exec == Exec::Parallel) {
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t r = 0; r < n; ++r) row(r);
  } else {
    for (std::ptrdiff_t r = 0; r < n; ++r) row(r);
  }
}

void advect_upwind(const GridSpec& grid, std::span<const double> ls, std::span<const double> speed,
                   std::span<const unsigned char> active, double dt, std::span<double> out, Exec exec) {
  const int nx = grid.nx, ny = grid.ny;
  const double h = grid.h();
  auto at = [&](int i, int j) { return ls[grid.index(i, j)]; };
  auto row = [&](int j) {
    for (int i = 0; i <= nx; ++i) {
      const std::size_t k = grid.index(i, j);
      if (!active[k]) {
        out[k] = ls[k];
        continue;
      }
      const double c = ls[k];
      const double dxm = i > 0 ? (c - at(i - 1, j)) / h : (at(i + 1, j) - c) / h;
      const double dxp = i < nx ? (at(i + 1, j) - c) / h : (c - at(i - 1, j)) / h;
      const double dym = j > 0 ? (c - at(i, j - 1)) / h : (at(i, j + 1) - c) / h;
      const double dyp = j < ny ? (at(i, j + 1) - c) / h : (c - at(i, j - 1)) / h;
      const double v = speed[k];
      double grad;
      if (v > 0.0) {
        grad = std::sqrt(std::pow(std::max(dxm, 0.0), 2) + std::pow(std::min(dxp, 0.0), 2) +
                         std::pow(std::max(dym, 0.0), 2) + std::pow(std::min(dyp, 0.0), 2));
      } else {
        grad = std::sqrt(std::pow(std::min(dxm, 0.0), 2) + std::pow(std::max(dxp, 0.0), 2) +
                         std::pow(std::min(dym, 0.0), 2) + std::pow(std::max(dyp, 0.0), 2));
      }
      out[k] = c - dt * v * grad;
    }
  };
  for_each_index(ny + 1, row, exec);
}

}  // namespace tshape::kernels
