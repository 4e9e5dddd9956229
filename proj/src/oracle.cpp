#include "torsionshape/oracle.hpp"

#include <cmath>
#include <numbers>

#include "torsionshape/error.hpp"

namespace tshape::oracle {

namespace {

void require_dimension(int n) {
  if (n < 2) throw Error(ErrorCode::BadDimension, "dimension must be at least 2");
}

void require_not_one(double alpha) {
  if (alpha == 1.0) throw Error(ErrorCode::AlphaOne, "alpha = 1 admits no or infinitely many radial solutions");
}

void require_alpha_above_one(double alpha) {
  require_not_one(alpha);
  if (!(alpha > 1.0)) throw Error(ErrorCode::BadDegree, "this quantity needs alpha > 1");
}

}  // namespace

double unit_ball_volume(int n) {
  return std::pow(std::numbers::pi, 0.5 * n) / std::tgamma(0.5 * n + 1.0);
}

double unit_sphere_area(int n) { return n * unit_ball_volume(n); }

double fbp_radius(double k, double alpha, int n) {
  require_dimension(n);
  if (!(k > 0.0)) throw Error(ErrorCode::BadProfile, "radial constant must be positive");
  if (!(alpha > 0.0)) throw Error(ErrorCode::BadDegree, "alpha must be positive");
  require_not_one(alpha);
  return std::pow(k * n, -1.0 / (alpha - 1.0));
}

BallFields ball_fields(double radius, int n, double r_point) {
  require_dimension(n);
  if (!(radius > 0.0)) throw Error(ErrorCode::BadParams, "radius must be positive");
  return {std::max(0.0, (radius * radius - r_point * r_point) / (2.0 * n)), radius / n};
}

EnergyPhi ball_energy_phi(double radius, double k, double alpha, int n) {
  require_dimension(n);
  if (!(radius > 0.0) || !(k > 0.0)) throw Error(ErrorCode::BadParams, "radius and k must be positive");
  EnergyPhi out;
  out.J = -unit_ball_volume(n) * std::pow(radius, n + 2) / (2.0 * n * (n + 2));
  out.phi = k * k * unit_sphere_area(n) * std::pow(radius, 2.0 * alpha + n) / (2.0 * alpha + n);
  return out;
}

Radii stability_radii(double k, double alpha, int n, double eps, StabilityMode mode) {
  require_dimension(n);
  require_alpha_above_one(alpha);
  if (!(k > 0.0)) throw Error(ErrorCode::BadProfile, "radial constant must be positive");
  if (!(eps > 0.0)) throw Error(ErrorCode::BadParams, "eps must be positive");
  const double e = 1.0 / (alpha - 1.0);
  if (mode == StabilityMode::Sup) {
    if (eps >= 1.0) throw Error(ErrorCode::EpsTooLarge, "sup mode needs eps < 1");
    return {std::pow((1.0 - eps) / (k * n), e), std::pow((1.0 + eps) / (k * n), e)};
  }
  if (eps >= k) throw Error(ErrorCode::EpsTooLarge, "hom mode needs eps < k");
  return {std::pow(n * (k + eps), -e), std::pow(n * (k - eps), -e)};
}

double stability_slope(double k, double alpha, int n) {
  require_alpha_above_one(alpha);
  return 2.0 / ((alpha - 1.0) * std::pow(n * k, 1.0 / (alpha - 1.0)));
}

Sandwich sandwich_radial(double k, double alpha, int n) {
  require_dimension(n);
  require_alpha_above_one(alpha);
  if (!(k > 0.0)) throw Error(ErrorCode::BadProfile, "radial constant must be positive");
  Sandwich s;
  s.rho = std::pow(k, -1.0 / alpha);
  s.A = s.B = s.rho / n;  // |grad u_1| on the boundary of the ball G_1
  s.inner = std::pow(s.A, 1.0 / (alpha - 1.0)) * s.rho;
  s.outer = std::pow(s.B, 1.0 / (alpha - 1.0)) * s.rho;
  const double r = fbp_radius(k, alpha, n);
  if (std::abs(s.inner - r) > 1e-12 * r)
    throw Error(ErrorCode::BadParams, "radial sandwich radius disagrees with the ball solution");
  return s;
}

double multiplier_rescale(double mu, double alpha) {
  if (!(mu < 0.0)) throw Error(ErrorCode::BadMultiplier, "multiplier must be negative");
  require_alpha_above_one(alpha);
  return std::pow(-2.0 * mu, 1.0 / (2.0 * (alpha - 1.0)));
}

nlohmann::json report(double k, double alpha, int n, double eps) {
  nlohmann::json j;
  j["schema"] = 1;
  j["input"] = {{"k", k}, {"alpha", alpha}, {"N", n}, {"eps", eps}};
  const double R = fbp_radius(k, alpha, n);
  const BallFields bf = ball_fields(R, n, 0.0);
  const EnergyPhi ep = ball_energy_phi(R, k, alpha, n);
  j["radius"] = R;
  j["u_center"] = bf.u;
  j["boundary_gradient"] = bf.boundary_gradient;
  j["J"] = ep.J;
  j["phi"] = ep.phi;
  j["unit_ball_volume"] = unit_ball_volume(n);
  j["unit_sphere_area"] = unit_sphere_area(n);
  if (alpha > 1.0) {
    // At the ball solution |grad u| = g, so -2 mu = 1 and the rescale is the identity.
    const double mu = -0.5 * std::pow(bf.boundary_gradient / (k * std::pow(R, alpha)), 2);
    j["mu"] = mu;
    j["rescale_t"] = multiplier_rescale(mu, alpha);
    const Sandwich s = sandwich_radial(k, alpha, n);
    j["sandwich"] = {{"rho", s.rho}, {"A", s.A}, {"B", s.B}, {"inner", s.inner}, {"outer", s.outer}};
    j["slope"] = stability_slope(k, alpha, n);
    if (eps > 0.0 && eps < 1.0) {
      const Radii sup = stability_radii(k, alpha, n, eps, StabilityMode::Sup);
      j["r_eps"] = sup.r;
      j["R_eps"] = sup.R;
    }
    if (eps > 0.0 && eps < k) {
      const Radii hom = stability_radii(k, alpha, n, eps, StabilityMode::Hom);
      j["r_eps_hom"] = hom.r;
      j["R_eps_hom"] = hom.R;
    }
  }
  return j;
}

}  // namespace tshape::oracle
