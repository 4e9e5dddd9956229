#pragma once

#include <cstdint>
#include <variant>
#include <vector>

#include <json.hpp>

#include "torsionshape/vec2.hpp"

namespace tshape {

/// Angular profile families. Each describes g on the unit circle.
struct RadialProfile {
  double k = 1.0;
};

/// a[0] + sum_n a[n] cos(n theta) + b[n] sin(n theta); b[0] must be zero.
struct FourierProfile {
  std::vector<double> a;
  std::vector<double> b;
};

/// ((|cos theta| / a)^p + (|sin theta| / b)^p)^(alpha / p), so that
/// g(x) = ((|x1| / a)^p + (|x2| / b)^p)^(alpha / p).
struct PNormProfile {
  double p = 2.0;
  double a = 1.0;
  double b = 1.0;
};

using Profile = std::variant<RadialProfile, FourierProfile, PNormProfile>;

/// Positively homogeneous weight g(x) = scale * |x|^alpha * profile(angle(x)).
///
/// Immutable after construction; concurrent evaluation is safe.
class Weight {
 public:
  static constexpr int kPositivitySamples = 4096;

  /// Validates alpha > 0 and profile positivity on kPositivitySamples angles.
  Weight(double alpha, Profile profile, double scale = 1.0);

  static Weight radial(double k, double alpha) { return Weight(alpha, RadialProfile{k}); }
  static Weight from_json(const nlohmann::json& j);
  nlohmann::json to_json() const;

  double alpha() const { return alpha_; }
  double scale() const { return scale_; }
  const Profile& profile_spec() const { return profile_; }

  /// True when the profile is a constant (g = k |x|^alpha).
  bool is_radial() const;
  /// Constant value of the profile; only meaningful when is_radial().
  double radial_constant() const;

  double profile(double theta) const;
  double operator()(Vec2 x) const;
  double min_profile() const { return min_profile_; }
  double max_profile() const { return max_profile_; }

  /// Boundary radius of the sublevel set {g < t} along direction theta.
  double sublevel_radius(double t, double theta) const;

  /// Same weight multiplied by a positive constant factor.
  Weight scaled(double factor) const;

 private:
  double alpha_;
  Profile profile_;
  double scale_;
  double min_profile_ = 0.0;
  double max_profile_ = 0.0;
};

struct QuasiconvexReport {
  bool pass = true;
  /// min over sampled pairs of (f(x) + f(y)) / 2 - f((x + y) / 2), f = g^(1/alpha).
  double worst_margin = 0.0;
  Vec2 witness_x;
  Vec2 witness_y;
};

/// Random midpoint test of the convexity of g^(1/alpha) on pairs drawn from
/// the annulus 0.5 <= |x| <= 2.
QuasiconvexReport check_quasiconvex(const Weight& w, int n_samples, double tol,
                                    std::uint64_t seed = 12345);

double canonical_angle(double theta);

}  // namespace tshape
