#include "torsionshape/torsion.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "torsionshape/error.hpp"
#include "torsionshape/kernels.hpp"

namespace tshape {

namespace {

struct System {
  kernels::StencilOperator op;
  std::vector<std::size_t> node_of;  // unknown -> node index
  std::vector<int> unknown_of;       // node -> unknown (or -1)
};

// Ghost-fluid Dirichlet discretisation scaled by h^2: an outside neighbour at
// cut fraction theta along the grid line contributes 1/theta to the diagonal
// (linear ghost extrapolation through u = 0 at the interface), which keeps
// the matrix symmetric positive definite.
System assemble(const Domain& d, double min_fraction) {
  const GridSpec& g = d.grid();
  const NodeField& ls = d.ls();
  System sys;
  sys.unknown_of.assign(g.node_count(), -1);
  for (int j = 0; j <= g.ny; ++j)
    for (int i = 0; i <= g.nx; ++i)
      if (d.inside(i, j)) {
        sys.unknown_of[g.index(i, j)] = static_cast<int>(sys.node_of.size());
        sys.node_of.push_back(g.index(i, j));
      }
  const std::size_t n = sys.node_of.size();
  sys.op.diag.assign(n, 0.0);
  sys.op.neighbours.assign(n, {-1, -1, -1, -1});
  sys.op.off = 1.0;
  kernels::for_each_index(static_cast<int>(n), [&](int r) {
    const std::size_t k = sys.node_of[r];
    const int i = static_cast<int>(k % (g.nx + 1)), j = static_cast<int>(k / (g.nx + 1));
    const int nb[4][2] = {{i - 1, j}, {i + 1, j}, {i, j - 1}, {i, j + 1}};
    const double here = ls(i, j);
    double diag = 0.0;
    for (int q = 0; q < 4; ++q) {
      const int a = nb[q][0], b = nb[q][1];
      const int u = sys.unknown_of[g.index(a, b)];
      if (u >= 0) {
        sys.op.neighbours[r][q] = u;
        diag += 1.0;
      } else {
        const double theta = std::max(here / (here - ls(a, b)), min_fraction);
        diag += 1.0 / theta;
      }
    }
    sys.op.diag[r] = diag;
  });
  return sys;
}

struct CgResult {
  int iterations = 0;
  double rel_residual = 0.0;
  bool converged = false;
};

CgResult conjugate_gradient(const kernels::StencilOperator& op, std::span<const double> b,
                            std::span<double> x, double rel_tol, int max_iters, bool jacobi) {
  const std::size_t n = op.size();
  std::vector<double> r(n), z(n), p(n), q(n);
  kernels::apply(op, x, q);
  for (std::size_t i = 0; i < n; ++i) r[i] = b[i] - q[i];
  const double bnorm = std::sqrt(kernels::dot(b, b));
  CgResult res;
  if (bnorm == 0.0) {
    res.converged = true;
    return res;
  }
  auto precondition = [&] {
    if (jacobi) {
      for (std::size_t i = 0; i < n; ++i) z[i] = r[i] / op.diag[i];
    } else {
      std::copy(r.begin(), r.end(), z.begin());
    }
  };
  precondition();
  p = z;
  double rz = kernels::dot(r, z);
  double rnorm = std::sqrt(kernels::dot(r, r));
  for (int it = 0; it < max_iters; ++it) {
    if (rnorm <= rel_tol * bnorm) {
      res.converged = true;
      break;
    }
    kernels::apply(op, p, q);
    const double pq = kernels::dot(p, q);
    if (!(pq > 0.0)) break;
    const double step = rz / pq;
    kernels::axpy(step, p, x);
    kernels::axpy(-step, q, r);
    precondition();
    const double rz_new = kernels::dot(r, z);
    kernels::xpay(z, rz_new / rz, p);
    rz = rz_new;
    rnorm = std::sqrt(kernels::dot(r, r));
    res.iterations = it + 1;
  }
  if (rnorm <= rel_tol * bnorm) res.converged = true;
  res.rel_residual = rnorm / bnorm;
  return res;
}

}  // namespace

StressField solve_torsion(const Domain& d, const SolveOptions& opts) {
  const GridSpec& g = d.grid();
  const System sys = assemble(d, opts.min_fraction);
  const std::size_t n = sys.node_of.size();
  if (n == 0) throw Error(ErrorCode::EmptyDomain, "torsion solve on an empty domain");
  const double h2 = g.h() * g.h();
  std::vector<double> b(n, h2), x(n, 0.0);
  if (opts.initial_guess) {
    if (!(opts.initial_guess->grid() == g)) throw Error(ErrorCode::GridMismatch, "initial guess grid");
    const auto guess = opts.initial_guess->values();
    for (std::size_t r = 0; r < n; ++r) x[r] = std::max(guess[sys.node_of[r]], 0.0);
  }
  const int cap = opts.cap_factor * std::max(g.nx, g.ny);
  std::vector<double> x0 = x;
  CgResult res = conjugate_gradient(sys.op, b, x, opts.rel_tol, cap, false);
  bool fallback = false;
  if (!res.converged) {
    fallback = true;
    x = x0;
    res = conjugate_gradient(sys.op, b, x, opts.rel_tol, cap, true);
    if (!res.converged)
      throw Error(ErrorCode::SolverDiverged,
                  "conjugate gradients did not reach the tolerance (residual " +
                      std::to_string(res.rel_residual) + ")");
  }
  StressField out;
  out.domain = std::make_shared<const Domain>(d);
  out.values = NodeField(g, 0.0);
  auto vals = out.values.values();
  for (std::size_t r = 0; r < n; ++r) vals[sys.node_of[r]] = x[r];
  out.stats = {res.iterations, res.rel_residual, fallback, n};
  return out;
}

double energy_J(const StressField& u) { return -0.5 * integrate_nodal(*u.domain, u.values, 0.0); }

double phi_constraint(const Weight& w, const Domain& d) {
  return integrate(d, [&w](Vec2 x) {
    const double g = w(x);
    return g * g;
  });
}

std::vector<GradientSample> boundary_gradient(const StressField& u) {
  const Domain& d = *u.domain;
  const GridSpec& g = d.grid();
  const double h = g.h();
  const double s = 2.0 * h;
  const auto samples = boundary_samples(d);
  std::vector<GradientSample> out(samples.size());
  auto stencil_inside = [&](Vec2 p) {
    if (g.distance_to_box_edge(p) <= h) return false;
    const int i = std::clamp(static_cast<int>((p.x - g.x0) / h), 0, g.nx - 1);
    const int j = std::clamp(static_cast<int>((p.y - g.y0) / h), 0, g.ny - 1);
    return d.inside(i, j) && d.inside(i + 1, j) && d.inside(i, j + 1) && d.inside(i + 1, j + 1);
  };
  kernels::for_each_index(static_cast<int>(samples.size()), [&](int k) {
    GradientSample gs;
    gs.sample = samples[k];
    const Vec2 q1 = samples[k].point - s * samples[k].normal;
    const Vec2 q2 = samples[k].point - 2.0 * s * samples[k].normal;
    gs.valid = stencil_inside(q1) && stencil_inside(q2);
    if (gs.valid) {
      const double u1 = u.values.bilinear(q1), u2 = u.values.bilinear(q2);
      gs.grad = (4.0 * u1 - u2) / (2.0 * s);
    }
    out[k] = gs;
  });
  return out;
}

Residual residual_fbp(const std::vector<GradientSample>& grads, const Weight& w, double c) {
  if (!(c >= 0.0) || !std::isfinite(c)) throw Error(ErrorCode::BadScale, "residual scale c must be >= 0");
  const double norm_c = c > 0.0 ? c : 1.0;
  Residual res;
  double num2 = 0.0, den2 = 0.0, sup_num = 0.0, sup_den = 0.0;
  for (const auto& gs : grads) {
    if (!gs.valid) {
      ++res.starved;
      continue;
    }
    ++res.valid;
    const double target = w(gs.sample.point);
    const double diff = std::abs(gs.grad - c * target);
    num2 += diff * diff * gs.sample.ds;
    den2 += (norm_c * target) * (norm_c * target) * gs.sample.ds;
    sup_num = std::max(sup_num, diff);
    sup_den = std::max(sup_den, norm_c * target);
  }
  if (res.valid == 0) throw Error(ErrorCode::StencilStarved, "no boundary sample has a usable stencil");
  res.sup = sup_num / sup_den;
  res.l2 = std::sqrt(num2 / den2);
  return res;
}

Residual residual_fbp(const StressField& u, const Weight& w, double c) {
  return residual_fbp(boundary_gradient(u), w, c);
}

double objective_exponent(double alpha) { return (2.0 + 2.0) / (2.0 * alpha + 2.0); }

double objective_scale_invariant(const Weight& w, const Domain& d, const StressField& u) {
  const double phi = phi_constraint(w, d);
  return std::pow(phi, -objective_exponent(w.alpha())) * energy_J(u);
}

double weighted_isoperimetric_ratio(const Weight& w, const Domain& d) {
  double perimeter = 0.0;
  for (const auto& s : boundary_samples(d)) perimeter += w(s.point) * s.ds;
  return perimeter / std::pow(phi_constraint(w, d), (w.alpha() + 1.0) / (2.0 * w.alpha() + 2.0));
}

FunctionalReport functional_report(const Weight& w, const StressField& u, double c) {
  FunctionalReport rep;
  rep.J = energy_J(u);
  rep.phi = phi_constraint(w, *u.domain);
  const Residual r = residual_fbp(u, w, c);
  rep.residual_sup = r.sup;
  rep.residual_l2 = r.l2;
  rep.starved_samples = r.starved;
  rep.objective = std::pow(rep.phi, -objective_exponent(w.alpha())) * rep.J;
  return rep;
}

}  // namespace tshape
