#pragma once

#include <map>
#include <string>

#include <json.hpp>

#include "torsionshape/domain.hpp"
#include "torsionshape/weight.hpp"

namespace tshape {

/// Outcome of one numerical check. pass holds iff measured <= tol.
struct CheckReport {
  std::string name;
  bool pass = false;
  double measured = 0.0;
  double tol = 0.0;
  Vec2 witness;
  std::map<std::string, double> extra;

  nlohmann::json to_json() const;
};

/// Origin strictly inside (ls(O) < -h) and a single connected component.
/// measured counts violations (extra components plus one if O is outside).
CheckReport check_basic(const Domain& d);

/// Each ray from O crosses the boundary once: measured is the largest depth
/// by which the level set re-enters the inside beyond the first exit.
CheckReport check_starshaped(const Domain& d, int n_rays, double tol);

/// Largest distance from a boundary point to the boundary of the convex hull.
CheckReport check_convex(const Domain& d, double tol);

/// Inclusions A^(1/(alpha-1)) G_1 within Omega within B^(1/(alpha-1)) G_1,
/// per ray, at slack 2h + grad_tol (length units).
CheckReport check_sandwich(const Domain& d, const Weight& w, double grad_tol = 2e-2,
                           int n_rays = 720);

/// Hausdorff distance between d and its mirror image about {x_axis = 0}.
CheckReport check_symmetry(const Domain& d, int axis, double tol);

/// Spread max - min of the ray radii from O.
CheckReport check_radial_ball(const Domain& d, double tol, int n_rays = 720);

/// Largest outer level-set value over inside nodes of inner.
CheckReport check_inclusion(const Domain& inner, const Domain& outer, double slack);

/// Homothety laws for J and phi between Omega and t Omega.
CheckReport check_scaling_laws(const Domain& d, const Weight& w, double t, double tol = 2e-2);

}  // namespace tshape
