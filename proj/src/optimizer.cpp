#include "torsionshape/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "torsionshape/error.hpp"
#include "torsionshape/kernels.hpp"
#include "torsionshape/oracle.hpp"

namespace tshape {

void OptimizerParams::validate() const {
  if (!(cfl > 0.0 && cfl < 1.0)) throw Error(ErrorCode::BadParams, "cfl must lie in (0, 1)");
  if (!(tol_residual > 0.0) || !(tol_objective > 0.0))
    throw Error(ErrorCode::BadParams, "tolerances must be positive");
  if (max_iters < 0 || reinit_every < 1 || max_backtracks < 0 || min_iters < 0)
    throw Error(ErrorCode::BadParams, "iteration counts out of range");
  if (!(velocity_floor >= 0.0) || !(band_cells >= 3.0))
    throw Error(ErrorCode::BadParams, "velocity floor or band width out of range");
}

OptimizerParams OptimizerParams::from_json(const nlohmann::json& j) {
  OptimizerParams p;
  try {
    p.max_iters = j.value("max_iters", p.max_iters);
    p.cfl = j.value("cfl", p.cfl);
    p.tol_residual = j.value("tol_residual", p.tol_residual);
    p.tol_objective = j.value("tol_objective", p.tol_objective);
    p.reinit_every = j.value("reinit_every", p.reinit_every);
    p.velocity_floor = j.value("velocity_floor", p.velocity_floor);
    p.band_cells = j.value("band_cells", p.band_cells);
    p.max_backtracks = j.value("max_backtracks", p.max_backtracks);
    p.min_iters = j.value("min_iters", p.min_iters);
    const std::string mode = j.value("multiplier_mode", std::string("lsq"));
    if (mode == "lsq") {
      p.multiplier_mode = MultiplierMode::Lsq;
    } else if (mode == "ratio") {
      p.multiplier_mode = MultiplierMode::Ratio;
    } else {
      throw Error(ErrorCode::ConfigParse, "optimizer.multiplier_mode must be lsq or ratio");
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::ConfigParse, std::string("optimizer: ") + e.what());
  }
  p.validate();
  return p;
}

nlohmann::json OptimizerParams::to_json() const {
  return {{"max_iters", max_iters},
          {"cfl", cfl},
          {"tol_residual", tol_residual},
          {"tol_objective", tol_objective},
          {"reinit_every", reinit_every},
          {"multiplier_mode", multiplier_mode == MultiplierMode::Lsq ? "lsq" : "ratio"},
          {"velocity_floor", velocity_floor},
          {"band_cells", band_cells},
          {"max_backtracks", max_backtracks},
          {"min_iters", min_iters}};
}

std::string to_string(Termination t) {
  switch (t) {
    case Termination::ResidualConverged: return "residual_converged";
    case Termination::ObjectiveStalled: return "objective_stalled";
    case Termination::MaxIters: return "max_iters";
  }
  return "unknown";
}

std::pair<Domain, double> rescale_to_constraint(const Domain& d, const Weight& w, double tol,
                                                int max_rounds) {
  Domain cur = d;
  double total = 1.0;
  for (int round = 0; round < max_rounds; ++round) {
    const double phi = phi_constraint(w, cur);
    if (!(phi > 0.0)) throw Error(ErrorCode::EmptyDomain, "constraint value is not positive");
    if (std::abs(phi - 1.0) <= tol) break;
    const double t = std::pow(phi, -1.0 / (2.0 * w.alpha() + 2.0));
    cur = scale_domain(cur, t);
    total *= t;
  }
  return {std::move(cur), total};
}

ShapeDerivative shape_derivative(const std::vector<GradientSample>& grads, const Weight& w,
                                 const std::vector<double>& vn) {
  if (vn.size() != grads.size()) throw Error(ErrorCode::BadParams, "one normal speed per sample required");
  ShapeDerivative out;
  for (std::size_t k = 0; k < grads.size(); ++k) {
    const auto& gs = grads[k];
    const double g = w(gs.sample.point);
    out.dphi += g * g * vn[k] * gs.sample.ds;
    if (gs.valid) out.dJ -= 0.5 * gs.grad * gs.grad * vn[k] * gs.sample.ds;
  }
  return out;
}

double estimate_multiplier(const std::vector<GradientSample>& grads, const Weight& w, MultiplierMode mode) {
  double num = 0.0, den = 0.0, ratio_sum = 0.0;
  int count = 0;
  for (const auto& gs : grads) {
    if (!gs.valid) continue;
    const double g = w(gs.sample.point);
    const double g2 = g * g, d2 = gs.grad * gs.grad;
    num += d2 * g2 * gs.sample.ds;
    den += g2 * g2 * gs.sample.ds;
    if (g2 > 0.0) {
      ratio_sum += d2 / g2;
      ++count;
    }
  }
  if (den < 1e-14 || count == 0)
    throw Error(ErrorCode::DegenerateWeight, "weight vanishes on the sampled boundary");
  return mode == MultiplierMode::Lsq ? -0.5 * num / den : -0.5 * ratio_sum / count;
}

double estimate_multiplier(const StressField& u, const Weight& w, MultiplierMode mode) {
  return estimate_multiplier(boundary_gradient(u), w, mode);
}

std::pair<Domain, double> fbp_rescale(const Domain& d, double mu, double alpha) {
  const double t = oracle::multiplier_rescale(mu, alpha);
  return {scale_domain(d, t), t};
}

nlohmann::json to_json(const IterationRecord& r) {
  return {{"iter", r.iter},        {"J", r.J},
          {"phi", r.phi},          {"objective", r.objective},
          {"mu", r.mu},            {"residual_sup", r.residual_sup},
          {"residual_l2", r.residual_l2}, {"dt", r.dt},
          {"backtracks", r.backtracks},   {"cg_iterations", r.cg_iterations}};
}

namespace {

struct State {
  std::vector<GradientSample> grads;
  double mu = 0.0;
  double J = 0.0;
  double phi = 0.0;
  double objective = 0.0;
  Residual trial;  // residual after the trial multiplier homothety
};

State evaluate(const Weight& w, const StressField& u, MultiplierMode mode) {
  State s;
  s.grads = boundary_gradient(u);
  s.mu = estimate_multiplier(s.grads, w, mode);
  s.J = energy_J(u);
  s.phi = phi_constraint(w, *u.domain);
  s.objective = std::pow(s.phi, -objective_exponent(w.alpha())) * s.J;
  if (s.mu < 0.0) {
    // The homothety t = (-2 mu)^(1/(2(alpha-1))) maps |grad u| - sqrt(-2 mu) g
    // into t (|grad u_t| - g); the normalised residual is scale invariant.
    s.trial = residual_fbp(s.grads, w, std::sqrt(-2.0 * s.mu));
  } else {
    s.trial.sup = s.trial.l2 = std::numeric_limits<double>::infinity();
  }
  return s;
}

}  // namespace

OptimizationTrace optimize(const Weight& w, const Domain& init, const OptimizerParams& params,
                           const IterationObserver& observer) {
  if (w.alpha() == 1.0) throw Error(ErrorCode::AlphaOne, "optimizer requires alpha != 1");
  if (!(w.alpha() > 1.0)) throw Error(ErrorCode::BadDegree, "optimizer requires alpha > 1");
  params.validate();
  const GridSpec& g = init.grid();
  const double h = g.h();

  auto [cur, t0] = rescale_to_constraint(init, w);
  (void)t0;
  StressField u = solve_torsion(cur);
  State state = evaluate(w, u, params.multiplier_mode);

  std::vector<IterationRecord> records;
  Termination reason = Termination::MaxIters;
  int since_reinit = 0;
  double last_dt = 0.0;
  int last_backtracks = 0;

  for (int iter = 0;; ++iter) {
    IterationRecord rec{iter,
                        state.J,
                        state.phi,
                        state.objective,
                        state.mu,
                        state.trial.sup,
                        state.trial.l2,
                        last_dt,
                        last_backtracks,
                        u.stats.iterations};
    records.push_back(rec);
    if (observer) observer(rec);

    if (iter >= params.min_iters && state.trial.sup <= params.tol_residual) {
      reason = Termination::ResidualConverged;
      break;
    }
    if (iter >= params.max_iters) {
      reason = Termination::MaxIters;
      break;
    }

    // Normal speed Vn = |grad u|^2 / 2 + mu g^2 at every sample.
    const double mu = std::min(state.mu, 0.0);
    std::vector<double> vn(state.grads.size(), 0.0);
    double vmax = 0.0, scale_sum = 0.0;
    int valid = 0;
    std::vector<BoundarySample> samples;
    samples.reserve(state.grads.size());
    for (std::size_t k = 0; k < state.grads.size(); ++k) {
      const auto& gs = state.grads[k];
      samples.push_back(gs.sample);
      if (!gs.valid) continue;
      const double gw = w(gs.sample.point);
      vn[k] = 0.5 * gs.grad * gs.grad + mu * gw * gw;
      vmax = std::max(vmax, std::abs(vn[k]));
      scale_sum += 0.5 * gs.grad * gs.grad;
      ++valid;
    }
    const double floor = params.velocity_floor * (valid > 0 ? scale_sum / valid : 0.0);
    const double denom = std::max(vmax, floor);
    if (!(denom > 0.0)) {
      reason = Termination::ObjectiveStalled;
      break;
    }
    double dt = params.cfl * h / denom;

    const std::vector<int> nearest = nearest_sample_map(cur, samples, params.band_cells * h);
    std::vector<double> speed(g.node_count(), 0.0);
    std::vector<unsigned char> active(g.node_count(), 0);
    for (std::size_t k = 0; k < nearest.size(); ++k) {
      if (nearest[k] >= 0) {
        speed[k] = vn[static_cast<std::size_t>(nearest[k])];
        active[k] = 1;
      }
    }

    bool accepted = false;
    int backtracks = 0;
    for (; backtracks <= params.max_backtracks; ++backtracks) {
      NodeField next(g);
      kernels::advect_upwind(g, cur.ls().values(), speed, active, dt, next.values());
      Domain moved(std::move(next), false);
      auto [cand, tc] = rescale_to_constraint(moved, w);
      (void)tc;
      StressField u_new = solve_torsion(cand, SolveOptions{.initial_guess = &u.values});
      State s_new = evaluate(w, u_new, params.multiplier_mode);
      const double slack = params.tol_objective * std::abs(state.objective);
      if (s_new.objective <= state.objective + slack) {
        const double decrease = state.objective - s_new.objective;
        cur = std::move(cand);
        u = std::move(u_new);
        state = std::move(s_new);
        accepted = true;
        if (decrease < params.tol_objective * std::abs(state.objective) &&
            state.trial.sup > params.tol_residual) {
          // Accepted but no longer making progress.
          reason = Termination::ObjectiveStalled;
        }
        break;
      }
      dt *= 0.5;
    }
    last_dt = dt;
    last_backtracks = backtracks;
    if (!accepted) {
      reason = Termination::ObjectiveStalled;
      break;
    }
    if (reason == Termination::ObjectiveStalled) {
      records.push_back({iter + 1, state.J, state.phi, state.objective, state.mu, state.trial.sup,
                         state.trial.l2, last_dt, last_backtracks, u.stats.iterations});
      if (observer) observer(records.back());
      break;
    }
    if (++since_reinit >= params.reinit_every) {
      since_reinit = 0;
      cur = rescale_to_constraint(reinitialize(cur), w).first;
      u = solve_torsion(cur, SolveOptions{.initial_guess = &u.values});
      state = evaluate(w, u, params.multiplier_mode);
    }
  }

  const double mu_final = state.mu;
  if (!(mu_final < 0.0)) throw Error(ErrorCode::BadMultiplier, "multiplier estimate is not negative");
  auto [final_domain, t] = fbp_rescale(cur, mu_final, w.alpha());
  StressField final_field = solve_torsion(final_domain);
  FunctionalReport rep = functional_report(w, final_field, 1.0);
  return OptimizationTrace{std::move(records), std::move(cur), std::move(final_domain),
                           std::move(final_field), mu_final, t, rep, reason};
}

}  // namespace tshape
