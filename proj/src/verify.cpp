#include "torsionshape/verify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "torsionshape/error.hpp"
#include "torsionshape/torsion.hpp"

namespace tshape {

namespace {

nlohmann::json number(double v) {
  if (std::isfinite(v)) return v;
  return v > 0 ? "inf" : (v < 0 ? "-inf" : "nan");
}

constexpr double kInf = std::numeric_limits<double>::infinity();

std::vector<Vec2> convex_hull(std::vector<Vec2> pts) {
  std::sort(pts.begin(), pts.end(), [](Vec2 a, Vec2 b) { return a.x < b.x || (a.x == b.x && a.y < b.y); });
  if (pts.size() < 3) return pts;
  std::vector<Vec2> hull(2 * pts.size());
  std::size_t k = 0;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    while (k >= 2 && cross(hull[k - 1] - hull[k - 2], pts[i] - hull[k - 2]) <= 0) --k;
    hull[k++] = pts[i];
  }
  for (std::size_t i = pts.size() - 1, t = k + 1; i > 0; --i) {
    while (k >= t && cross(hull[k - 1] - hull[k - 2], pts[i - 1] - hull[k - 2]) <= 0) --k;
    hull[k++] = pts[i - 1];
  }
  hull.resize(k - 1);
  return hull;
}

}  // namespace

nlohmann::json CheckReport::to_json() const {
  nlohmann::json j{{"name", name}, {"pass", pass}, {"measured", number(measured)},
                   {"tol", number(tol)}, {"witness", {witness.x, witness.y}}};
  if (!extra.empty()) {
    nlohmann::json e = nlohmann::json::object();
    for (const auto& [k, v] : extra) e[k] = number(v);
    j["extra"] = e;
  }
  return j;
}

CheckReport check_basic(const Domain& d) {
  CheckReport rep;
  rep.name = "basic";
  const double at_origin = d.ls().bilinear({0.0, 0.0});
  const bool origin_inside = at_origin < -d.h();
  const int components = inside_components(d);
  rep.measured = (origin_inside ? 0.0 : 1.0) + std::max(components - 1, 0) + (components == 0 ? 1.0 : 0.0);
  rep.tol = 0.0;
  rep.pass = rep.measured <= rep.tol;
  rep.extra = {{"ls_origin", at_origin}, {"components", components}};
  return rep;
}

CheckReport check_starshaped(const Domain& d, int n_rays, double tol) {
  CheckReport rep;
  rep.name = "starshaped";
  rep.tol = tol;
  const NodeField& f = d.ls();
  if (!(f.bilinear({0.0, 0.0}) < 0.0)) {
    rep.measured = kInf;
    rep.pass = false;
    return rep;
  }
  const GridSpec& g = d.grid();
  const double step = 0.25 * g.h();
  std::vector<double> depth(static_cast<std::size_t>(n_rays), 0.0);
  std::vector<Vec2> where(static_cast<std::size_t>(n_rays));
  for (int k = 0; k < n_rays; ++k) {
    const double theta = 2.0 * std::numbers::pi * k / n_rays;
    const Vec2 dir{std::cos(theta), std::sin(theta)};
    bool exited = false;
    for (double r = step;; r += step) {
      const Vec2 p = r * dir;
      if (g.distance_to_box_edge(p) <= 0.0) break;
      const double v = f.bilinear(p);
      if (!exited) {
        exited = v >= 0.0;
      } else if (-v > depth[k]) {
        depth[k] = -v;
        where[k] = p;
      }
    }
  }
  const auto worst = std::max_element(depth.begin(), depth.end());
  rep.measured = *worst;
  rep.witness = where[static_cast<std::size_t>(worst - depth.begin())];
  rep.pass = rep.measured <= tol;
  return rep;
}

CheckReport check_convex(const Domain& d, double tol) {
  CheckReport rep;
  rep.name = "convex";
  rep.tol = tol;
  const auto samples = boundary_samples(d);
  std::vector<Vec2> pts;
  pts.reserve(2 * samples.size());
  for (const auto& s : samples) {
    pts.push_back(s.a);
    pts.push_back(s.b);
  }
  const auto hull = convex_hull(pts);
  rep.measured = 0.0;
  for (const Vec2 p : pts) {
    double m = kInf;
    for (std::size_t e = 0; e < hull.size(); ++e) m = std::min(m, segment_distance(p, hull[e], hull[(e + 1) % hull.size()]));
    if (m > rep.measured) {
      rep.measured = m;
      rep.witness = p;
    }
  }
  rep.pass = rep.measured <= tol;
  return rep;
}

CheckReport check_sandwich(const Domain& d, const Weight& w, double grad_tol, int n_rays) {
  const double alpha = w.alpha();
  if (alpha == 1.0) throw Error(ErrorCode::AlphaOne, "sandwich bounds need alpha != 1");
  if (!(alpha > 1.0)) throw Error(ErrorCode::BadDegree, "sandwich bounds need alpha > 1");
  const GridSpec& g = d.grid();
  const double h = g.h();
  CheckReport rep;
  rep.name = "sandwich";
  rep.tol = 2.0 * h + grad_tol;

  // Solve on a dilation G_t = t^(1/alpha) G_1 sized to the box; boundary
  // gradients transform as |grad u_1|(x) = t^(-1/alpha) |grad u_t|(t^(1/alpha) x).
  const double rho_max = std::pow(1.0 / w.min_profile(), 1.0 / alpha);
  const double avail = std::min({-g.x0, g.x1, -g.y0, g.y1}) - (Domain::kMarginCells + 2) * h;
  const double dilation = 0.8 * avail / rho_max;
  const double level = std::pow(dilation, alpha);
  const Domain gt = build_domain(g, seeds::sublevel(w, level));
  const auto grads = boundary_gradient(solve_torsion(gt));
  double a_t = kInf, b_t = 0.0;
  for (const auto& gs : grads) {
    if (!gs.valid) continue;
    a_t = std::min(a_t, gs.grad);
    b_t = std::max(b_t, gs.grad);
  }
  if (!(b_t > 0.0)) throw Error(ErrorCode::StencilStarved, "no valid gradient sample on G_t");
  const double A = a_t / dilation, B = b_t / dilation;
  const double inner = std::pow(A, 1.0 / (alpha - 1.0));
  const double outer = std::pow(B, 1.0 / (alpha - 1.0));

  rep.measured = -kInf;
  for (int k = 0; k < n_rays; ++k) {
    const double theta = 2.0 * std::numbers::pi * k / n_rays;
    const double rho = w.sublevel_radius(1.0, theta);
    const double r = ray_radius(d, theta);
    const double v = std::max(inner * rho - r, r - outer * rho);
    if (v > rep.measured) {
      rep.measured = v;
      rep.witness = polar(r, theta);
    }
  }
  rep.pass = rep.measured <= rep.tol;
  rep.extra = {{"A", A}, {"B", B}, {"inner_scale", inner}, {"outer_scale", outer}, {"level", level}};
  return rep;
}

CheckReport check_symmetry(const Domain& d, int axis, double tol) {
  CheckReport rep;
  rep.name = axis == 0 ? "symmetry_x1" : "symmetry_x2";
  rep.tol = tol;
  rep.measured = hausdorff_distance(d, reflect(d, axis));
  rep.pass = rep.measured <= tol;
  return rep;
}

CheckReport check_radial_ball(const Domain& d, double tol, int n_rays) {
  CheckReport rep;
  rep.name = "radial_ball";
  rep.tol = tol;
  const auto radii = ray_radii(d, n_rays);
  const auto [lo, hi] = std::minmax_element(radii.begin(), radii.end());
  rep.measured = *lo > 0.0 ? *hi - *lo : kInf;
  rep.witness = polar(*hi, 2.0 * std::numbers::pi * static_cast<double>(hi - radii.begin()) / n_rays);
  rep.pass = rep.measured <= tol;
  rep.extra = {{"r_min", *lo}, {"r_max", *hi}};
  return rep;
}

CheckReport check_inclusion(const Domain& inner, const Domain& outer, double slack) {
  if (!(inner.grid() == outer.grid())) throw Error(ErrorCode::GridMismatch, "domains live on different grids");
  const GridSpec& g = inner.grid();
  CheckReport rep;
  rep.name = "inclusion";
  rep.tol = slack;
  rep.measured = 0.0;
  bool any = false;
  for (int j = 0; j <= g.ny; ++j) {
    for (int i = 0; i <= g.nx; ++i) {
      if (!inner.inside(i, j)) continue;
      const double v = outer.ls()(i, j);
      if (!any || v > rep.measured) {
        rep.measured = v;
        rep.witness = g.node(i, j);
        any = true;
      }
    }
  }
  if (!any) rep.measured = 0.0;
  rep.pass = rep.measured <= slack;
  return rep;
}

CheckReport check_scaling_laws(const Domain& d, const Weight& w, double t, double tol) {
  CheckReport rep;
  rep.name = "scaling_laws";
  rep.tol = tol;
  const Domain dt = scale_domain(d, t);
  const double j0 = energy_J(solve_torsion(d)), j1 = energy_J(solve_torsion(dt));
  const double p0 = phi_constraint(w, d), p1 = phi_constraint(w, dt);
  const double tj = std::pow(t, 4.0), tp = std::pow(t, 2.0 * w.alpha() + 2.0);
  const double ej = std::abs(j1 / j0 - tj) / tj;
  const double ep = std::abs(p1 / p0 - tp) / tp;
  rep.measured = std::max(ej, ep);
  rep.pass = rep.measured <= tol;
  rep.extra = {{"J_ratio", j1 / j0}, {"phi_ratio", p1 / p0}, {"J_rel_err", ej}, {"phi_rel_err", ep}};
  return rep;
}

}  // namespace tshape
