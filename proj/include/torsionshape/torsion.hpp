#pragma once

#include <memory>
#include <optional>
#include <vector>

#include "torsionshape/domain.hpp"
#include "torsionshape/weight.hpp"

namespace tshape {

struct SolverStats {
  int iterations = 0;
  double relative_residual = 0.0;
  bool jacobi_fallback = false;
  std::size_t unknowns = 0;
};

/// Torsion function u of a domain: -Lap u = 1 inside, u = 0 on the boundary.
/// Values are zero at outside nodes.
struct StressField {
  std::shared_ptr<const Domain> domain;
  NodeField values;
  SolverStats stats;
};

struct SolveOptions {
  double rel_tol = 1e-10;
  /// Iteration cap as a multiple of max(nx, ny).
  int cap_factor = 20;
  /// Cut fractions below this are clamped.
  double min_fraction = 1e-3;
  /// Optional initial guess (node field on the same grid).
  const NodeField* initial_guess = nullptr;
};

/// Five-point finite differences with ghost-fluid Dirichlet treatment at
/// irregular nodes, solved with conjugate gradients (Jacobi-preconditioned
/// retry if the plain iteration does not converge within the cap).
StressField solve_torsion(const Domain& d, const SolveOptions& opts = {});

/// J = -(1/2) int_Omega u.
double energy_J(const StressField& u);

/// phi = int_Omega g^2.
double phi_constraint(const Weight& w, const Domain& d);

struct GradientSample {
  BoundarySample sample;
  double grad = 0.0;
  bool valid = false;
};

/// One-sided second-order estimate of |grad u| along the inward normal at
/// each boundary sample. Samples whose stencil leaves the inside region are
/// flagged invalid.
std::vector<GradientSample> boundary_gradient(const StressField& u);

struct Residual {
  double sup = 0.0;
  double l2 = 0.0;
  int valid = 0;
  int starved = 0;
};

/// Residual of |grad u| = c g on the boundary. sup is max | |grad u| - c g |
/// over max(c g); l2 is the ds-weighted L2 norm over the L2 norm of c g. With
/// c = 0 both are normalised by g instead.
Residual residual_fbp(const std::vector<GradientSample>& grads, const Weight& w, double c);
Residual residual_fbp(const StressField& u, const Weight& w, double c);

/// Exponent (2 + N) / (2 alpha + N) for N = 2.
double objective_exponent(double alpha);
/// phi^(-(2 + N) / (2 alpha + N)) J.
double objective_scale_invariant(const Weight& w, const Domain& d, const StressField& u);

/// Sum over boundary samples of g ds divided by phi^((alpha + 1) / (2 alpha + 2)).
double weighted_isoperimetric_ratio(const Weight& w, const Domain& d);

struct FunctionalReport {
  double J = 0.0;
  double phi = 0.0;
  double residual_sup = 0.0;
  double residual_l2 = 0.0;
  double objective = 0.0;
  int starved_samples = 0;
};

FunctionalReport functional_report(const Weight& w, const StressField& u, double c = 1.0);

}  // namespace tshape
