#pragma once

#include <json.hpp>

namespace tshape::oracle {

/// Volume of the unit ball in R^n.
double unit_ball_volume(int n);
/// Area of the unit sphere in R^n.
double unit_sphere_area(int n);

/// Radius of the ball solving |grad u| = k |x|^alpha: (kN)^(-1/(alpha-1)).
double fbp_radius(double k, double alpha, int n);

struct BallFields {
  double u = 0.0;
  double boundary_gradient = 0.0;
};
BallFields ball_fields(double radius, int n, double r_point);

struct EnergyPhi {
  double J = 0.0;
  double phi = 0.0;
};
EnergyPhi ball_energy_phi(double radius, double k, double alpha, int n);

enum class StabilityMode { Sup, Hom };

struct Radii {
  double r = 0.0;
  double R = 0.0;
};
Radii stability_radii(double k, double alpha, int n, double eps, StabilityMode mode);

/// Leading-order width slope of the sup-mode bracket: 2 / ((alpha-1)(Nk)^(1/(alpha-1))).
double stability_slope(double k, double alpha, int n);

struct Sandwich {
  double rho = 0.0;  // radius of G_1
  double A = 0.0;
  double B = 0.0;
  double inner = 0.0;
  double outer = 0.0;
};
Sandwich sandwich_radial(double k, double alpha, int n);

/// Homothety factor (-2 mu)^(1/(2(alpha-1))) turning the optimality condition
/// |grad u|^2 = -2 mu g^2 into |grad u| = g.
double multiplier_rescale(double mu, double alpha);

/// Every closed-form quantity for (k, alpha, N, eps) as one JSON object.
nlohmann::json report(double k, double alpha, int n, double eps);

}  // namespace tshape::oracle
