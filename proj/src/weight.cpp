#include "torsionshape/weight.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>

#include "torsionshape/error.hpp"

namespace tshape {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double raw_profile(const Profile& profile, double alpha, double theta) {
  return std::visit(
      [&](const auto& p) -> double {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, RadialProfile>) {
          return p.k;
        } else if constexpr (std::is_same_v<T, FourierProfile>) {
          double v = p.a.empty() ? 0.0 : p.a[0];
          const std::size_t n = std::max(p.a.size(), p.b.size());
          for (std::size_t m = 1; m < n; ++m) {
            const double c = m < p.a.size() ? p.a[m] : 0.0;
            const double s = m < p.b.size() ? p.b[m] : 0.0;
            v += c * std::cos(m * theta) + s * std::sin(m * theta);
          }
          return v;
        } else {
          const double cx = std::abs(std::cos(theta)) / p.a;
          const double sy = std::abs(std::sin(theta)) / p.b;
          return std::pow(std::pow(cx, p.p) + std::pow(sy, p.p), alpha / p.p);
        }
      },
      profile);
}

void validate_profile_params(const Profile& profile) {
  std::visit(
      [](const auto& p) {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, RadialProfile>) {
          if (!std::isfinite(p.k)) throw Error(ErrorCode::BadProfile, "radial constant must be finite");
        } else if constexpr (std::is_same_v<T, FourierProfile>) {
          if (p.a.empty()) throw Error(ErrorCode::BadProfile, "fourier profile needs a[0]");
          if (!p.b.empty() && p.b[0] != 0.0)
            throw Error(ErrorCode::BadProfile, "fourier coefficient b[0] must be zero");
          for (double v : p.a)
            if (!std::isfinite(v)) throw Error(ErrorCode::BadProfile, "non-finite fourier coefficient");
          for (double v : p.b)
            if (!std::isfinite(v)) throw Error(ErrorCode::BadProfile, "non-finite fourier coefficient");
        } else {
          if (!(p.p >= 1.0) || !(p.a > 0.0) || !(p.b > 0.0) || !std::isfinite(p.p))
            throw Error(ErrorCode::BadProfile, "p-norm profile needs p >= 1 and a, b > 0");
        }
      },
      profile);
}

}  // namespace

double canonical_angle(double theta) {
  double t = std::fmod(theta, kTwoPi);
  if (t < 0.0) t += kTwoPi;
  return t >= kTwoPi ? 0.0 : t;
}

Weight::Weight(double alpha, Profile spec, double scale)
    : alpha_(alpha), profile_(std::move(spec)), scale_(scale) {
  if (!(alpha_ > 0.0) || !std::isfinite(alpha_))
    throw Error(ErrorCode::BadDegree, "degree of homogeneity must be positive");
  if (!(scale_ > 0.0) || !std::isfinite(scale_))
    throw Error(ErrorCode::BadProfile, "weight scale must be positive");
  validate_profile_params(profile_);
  min_profile_ = std::numeric_limits<double>::infinity();
  max_profile_ = -std::numeric_limits<double>::infinity();
  for (int i = 0; i < kPositivitySamples; ++i) {
    const double v = profile(kTwoPi * i / kPositivitySamples);
    min_profile_ = std::min(min_profile_, v);
    max_profile_ = std::max(max_profile_, v);
  }
  if (!(min_profile_ > 0.0))
    throw Error(ErrorCode::NonPositiveProfile,
                "profile minimum " + std::to_string(min_profile_) + " is not positive");
}

bool Weight::is_radial() const {
  if (std::holds_alternative<RadialProfile>(profile_)) return true;
  return max_profile_ - min_profile_ <= 1e-14 * max_profile_;
}

double Weight::radial_constant() const { return profile(0.0); }

double Weight::profile(double theta) const {
  return scale_ * raw_profile(profile_, alpha_, canonical_angle(theta));
}

double Weight::operator()(Vec2 x) const {
  const double r = norm(x);
  if (r == 0.0) return 0.0;
  return std::pow(r, alpha_) * profile(std::atan2(x.y, x.x));
}

double Weight::sublevel_radius(double t, double theta) const {
  if (!(t > 0.0)) throw Error(ErrorCode::BadLevel, "sublevel value must be positive");
  return std::pow(t / profile(theta), 1.0 / alpha_);
}

Weight Weight::scaled(double factor) const { return Weight(alpha_, profile_, scale_ * factor); }

Weight Weight::from_json(const nlohmann::json& j) {
  try {
    const double alpha = j.at("alpha").get<double>();
    const double scale = j.value("scale", 1.0);
    const auto& p = j.at("profile");
    const std::string type = p.at("type").get<std::string>();
    if (type == "radial") return Weight(alpha, RadialProfile{p.at("k").get<double>()}, scale);
    if (type == "fourier") {
      FourierProfile f;
      f.a = p.at("a").get<std::vector<double>>();
      f.b = p.value("b", std::vector<double>{});
      return Weight(alpha, f, scale);
    }
    if (type == "pnorm") {
      return Weight(alpha,
                    PNormProfile{p.at("p").get<double>(), p.value("a", 1.0), p.value("b", 1.0)}, scale);
    }
    throw Error(ErrorCode::BadProfile, "unknown profile type '" + type + "'");
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::ConfigParse, std::string("weight: ") + e.what());
  }
}

nlohmann::json Weight::to_json() const {
  nlohmann::json j;
  j["alpha"] = alpha_;
  if (scale_ != 1.0) j["scale"] = scale_;
  std::visit(
      [&](const auto& p) {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, RadialProfile>) {
          j["profile"] = {{"type", "radial"}, {"k", p.k}};
        } else if constexpr (std::is_same_v<T, FourierProfile>) {
          j["profile"] = {{"type", "fourier"}, {"a", p.a}, {"b", p.b}};
        } else {
          j["profile"] = {{"type", "pnorm"}, {"p", p.p}, {"a", p.a}, {"b", p.b}};
        }
      },
      profile_);
  return j;
}

QuasiconvexReport check_quasiconvex(const Weight& w, int n_samples, double tol, std::uint64_t seed) {
  if (n_samples < 100) throw Error(ErrorCode::BadParams, "check_quasiconvex needs at least 100 samples");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> radius(0.5, 2.0);
  std::uniform_real_distribution<double> angle(0.0, kTwoPi);
  const double inv_alpha = 1.0 / w.alpha();
  auto f = [&](Vec2 x) { return std::pow(w(x), inv_alpha); };

  QuasiconvexReport rep;
  rep.worst_margin = std::numeric_limits<double>::infinity();
  for (int s = 0; s < n_samples; ++s) {
    const Vec2 x = polar(radius(rng), angle(rng));
    const Vec2 y = polar(radius(rng), angle(rng));
    const double margin = 0.5 * (f(x) + f(y)) - f(0.5 * (x + y));
    if (margin < rep.worst_margin) {
      rep.worst_margin = margin;
      rep.witness_x = x;
      rep.witness_y = y;
    }
  }
  rep.pass = rep.worst_margin >= -tol;
  return rep;
}

}  // namespace tshape
