#pragma once

// Data-parallel inner loops. Every kernel takes an Exec tag: Parallel runs the
// OpenMP version, Serial runs the single-threaded reference used by the tests
// and the benchmark. Reductions are accumulated in fixed blocks and the block
// partials are summed in index order, so both paths produce bit-identical
// results for any thread count.

#include <array>
#include <cstddef>
#include <span>
#include <vector>

#include "torsionshape/grid.hpp"

namespace tshape::kernels {

enum class Exec { Serial, Parallel };

inline constexpr std::size_t kReductionBlock = 2048;

/// Caps the OpenMP team size (0 restores the runtime default).
void set_max_threads(int n);
int max_threads();

double dot(std::span<const double> a, std::span<const double> b, Exec exec = Exec::Parallel);

/// y += a * x
void axpy(double a, std::span<const double> x, std::span<double> y, Exec exec = Exec::Parallel);

/// y = x + a * y
void xpay(std::span<const double> x, double a, std::span<double> y, Exec exec = Exec::Parallel);

/// Symmetric five-point operator on a set of unknowns: each row has a diagonal
/// entry and up to four neighbours coupled with weight -off.
struct StencilOperator {
  std::vector<double> diag;
  std::vector<std::array<int, 4>> neighbours;  // -1 where absent
  double off = 0.0;

  std::size_t size() const { return diag.size(); }
};

void apply(const StencilOperator& op, std::span<const double> x, std::span<double> y,
           Exec exec = Exec::Parallel);

/// Sum of per-row partials row_sum(j) for j in [0, rows), accumulated in row order.
template <class RowSum>
double sum_rows(int rows, RowSum&& row_sum, Exec exec = Exec::Parallel) {
  std::vector<double> partial(static_cast<std::size_t>(rows), 0.0);
  if (exec == Exec::Parallel) {
#pragma omp parallel for schedule(static)
    for (int j = 0; j < rows; ++j) partial[static_cast<std::size_t>(j)] = row_sum(j);
  } else {
    for (int j = 0; j < rows; ++j) partial[static_cast<std::size_t>(j)] = row_sum(j);
  }
  double total = 0.0;
  for (double p : partial) total += p;
  return total;
}

template <class Body>
void for_each_index(int n, Body&& body, Exec exec = Exec::Parallel) {
  if (exec == Exec::Parallel) {
#pragma omp parallel for schedule(static)
    for (int i = 0; i < n; ++i) body(i);
  } else {
    for (int i = 0; i < n; ++i) body(i);
  }
}

/// One explicit first-order Godunov upwind step of ls_t + speed |grad ls| = 0.
/// Nodes with active[k] == 0 are copied unchanged; box-edge nodes use one-sided
/// differences.
void advect_upwind(const GridSpec& grid, std::span<const double> ls, std::span<const double> speed,
                   std::span<const unsigned char> active, double dt, std::span<double> out,
                   Exec exec = Exec::Parallel);

}  // namespace tshape::kernels
