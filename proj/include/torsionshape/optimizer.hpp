#pragma once

#include <functional>
#include <string>
#include <vector>

#include <json.hpp>

#include "torsionshape/domain.hpp"
#include "torsionshape/torsion.hpp"
#include "torsionshape/weight.hpp"

namespace tshape {

enum class MultiplierMode { Lsq, Ratio };

struct OptimizerParams {
  int max_iters = 300;
  double cfl = 0.45;
  double tol_residual = 5e-2;
  double tol_objective = 1e-6;
  int reinit_every = 10;
  MultiplierMode multiplier_mode = MultiplierMode::Lsq;
  /// The time step is cfl h / max(max |Vn|, velocity_floor * mean(|grad u|^2 / 2)).
  double velocity_floor = 0.1;
  /// Half-width of the advected band, in cells.
  double band_cells = 8.0;
  /// Step halvings tried before an objective increase ends the run.
  int max_backtracks = 4;
  /// Iterations before the residual test may stop the loop.
  int min_iters = 0;

  void validate() const;
  static OptimizerParams from_json(const nlohmann::json& j);
  nlohmann::json to_json() const;
};

struct IterationRecord {
  int iter = 0;
  double J = 0.0;
  double phi = 0.0;
  double objective = 0.0;
  double mu = 0.0;
  double residual_sup = 0.0;
  double residual_l2 = 0.0;
  double dt = 0.0;
  int backtracks = 0;
  int cg_iterations = 0;
};

enum class Termination { ResidualConverged, ObjectiveStalled, MaxIters };
std::string to_string(Termination t);

struct OptimizationTrace {
  std::vector<IterationRecord> records;
  Domain constrained;      // minimiser candidate with phi = 1
  Domain final_domain;     // after the multiplier homothety
  StressField final_field;
  double final_mu = 0.0;   // multiplier on the constrained domain
  double final_t = 1.0;    // homothety factor applied at the end
  FunctionalReport final_report;
  Termination reason = Termination::MaxIters;
  bool converged() const { return reason == Termination::ResidualConverged; }
};

/// Homothety restoring phi = 1; returns the domain and the cumulative factor.
std::pair<Domain, double> rescale_to_constraint(const Domain& d, const Weight& w,
                                                double tol = 1e-4, int max_rounds = 6);

struct ShapeDerivative {
  double dJ = 0.0;
  double dphi = 0.0;
};

/// Boundary-integral shape derivatives for the normal speed vn (one value per
/// gradient sample; invalid samples are skipped).
ShapeDerivative shape_derivative(const std::vector<GradientSample>& grads, const Weight& w,
                                 const std::vector<double>& vn);

/// Lagrange multiplier mu of |grad u|^2 = -2 mu g^2 on the boundary.
double estimate_multiplier(const std::vector<GradientSample>& grads, const Weight& w,
                           MultiplierMode mode = MultiplierMode::Lsq);
double estimate_multiplier(const StressField& u, const Weight& w,
                           MultiplierMode mode = MultiplierMode::Lsq);

/// t Omega with t = (-2 mu)^(1/(2(alpha-1))).
std::pair<Domain, double> fbp_rescale(const Domain& d, double mu, double alpha);

/// Optional per-iteration observer (the CLI streams trace lines through it).
using IterationObserver = std::function<void(const IterationRecord&)>;

OptimizationTrace optimize(const Weight& w, const Domain& init, const OptimizerParams& params,
                           const IterationObserver& observer = {});

nlohmann::json to_json(const IterationRecord& r);

}  // namespace tshape
