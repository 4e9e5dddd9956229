#pragma once

#include <array>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "torsionshape/grid.hpp"
#include "torsionshape/vec2.hpp"
#include "torsionshape/weight.hpp"

namespace tshape {

/// Analytic description of a set: negative inside, positive outside.
struct Seed {
  std::function<double(Vec2)> field;
  bool exact_distance = false;
};

namespace seeds {
Seed ball(Vec2 center, double radius);
Seed ellipse(Vec2 center, double semi_x, double semi_y);
Seed rectangle(Vec2 center, double half_x, double half_y);
Seed annulus(Vec2 center, double inner, double outer);
/// Starshaped set {|x - c| < radius(theta)}.
Seed star(Vec2 center, std::function<double(double)> radius);
/// Sublevel set {g < t} of a weight.
Seed sublevel(const Weight& w, double t);
Seed unite(Seed a, Seed b);
Seed subtract(Seed a, Seed b);
}  // namespace seeds

/// Bounded open planar set stored as a level-set field on a fixed grid.
/// Inside is ls < 0 strictly; ls == 0 counts as outside.
class Domain {
 public:
  static constexpr int kMarginCells = 4;

  /// Validates the margin rule and non-emptiness unless validate is false.
  Domain(NodeField ls, bool signed_distance, bool validate = true);

  const GridSpec& grid() const { return ls_.grid(); }
  const NodeField& ls() const { return ls_; }
  bool is_signed_distance() const { return signed_distance_; }
  double h() const { return grid().h(); }
  bool inside(int i, int j) const { return ls_(i, j) < 0.0; }
  std::size_t inside_count() const;

 private:
  NodeField ls_;
  bool signed_distance_;
};

/// Interface segment with its outward unit normal; ds is the segment length.
struct BoundarySample {
  Vec2 point;
  Vec2 normal;
  double ds = 0.0;
  Vec2 a;
  Vec2 b;
};

Domain build_domain(const GridSpec& grid, const Seed& seed);

/// Signed-distance reinitialization: exact distances to the interface
/// segments in a narrow band, fast marching elsewhere.
Domain reinitialize(const Domain& d);

std::vector<BoundarySample> boundary_samples(const Domain& d);

double volume(const Domain& d);
/// Cut-cell quadrature of an analytic integrand (degree-2 exact rule per triangle).
double integrate(const Domain& d, const std::function<double(Vec2)>& f);
/// Cut-cell quadrature of the piecewise-linear interpolant of nodal values; if
/// boundary_value is set, interface points take that value.
double integrate_nodal(const Domain& d, const NodeField& values,
                       std::optional<double> boundary_value = std::nullopt);

Domain scale_domain(const Domain& d, double t);
Domain steiner_symmetrize(const Domain& d, int axis);
Domain schwarz_symmetrize(const Domain& d);
/// Mirror image under x_axis -> -x_axis.
Domain reflect(const Domain& d, int axis);
double hausdorff_distance(const Domain& d1, const Domain& d2);

/// Distance from the origin to the first zero crossing along direction theta;
/// 0 when the origin is not inside.
double ray_radius(const Domain& d, double theta);
std::vector<double> ray_radii(const Domain& d, int n_rays);

/// For every node within max_dist of the interface, the index of the nearest
/// boundary sample (by point-to-segment distance); -1 elsewhere.
std::vector<int> nearest_sample_map(const Domain& d, const std::vector<BoundarySample>& samples,
                                    double max_dist);

/// Number of 4-connected components of inside nodes.
int inside_components(const Domain& d);

}  // namespace tshape
