#pragma once

#include <cmath>
#include <numbers>
#include <random>

#include "torsionshape/domain.hpp"
#include "torsionshape/error.hpp"

namespace tshape::testing {

inline constexpr double kPi = std::numbers::pi;

// Starshaped blob r(theta) = r0 (1 + sum a_n cos(n theta + phase_n)) around c.
struct Blob {
  Vec2 center;
  double r0 = 1.0;
  std::vector<double> amp;
  std::vector<double> phase;

  double radius(double theta) const {
    double r = 1.0;
    for (std::size_t n = 0; n < amp.size(); ++n) r += amp[n] * std::cos((n + 2.0) * theta + phase[n]);
    return r0 * r;
  }
  Seed seed() const {
    Blob b = *this;
    return seeds::star(center, [b](double t) { return b.radius(t); });
  }
};

inline Blob random_blob(std::mt19937_64& rng, double r0_lo, double r0_hi, double offset, double max_amp) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  Blob b;
  b.r0 = r0_lo + (r0_hi - r0_lo) * u(rng);
  b.center = {offset * (2 * u(rng) - 1), offset * (2 * u(rng) - 1)};
  for (int n = 0; n < 3; ++n) {
    b.amp.push_back(max_amp * u(rng) / (n + 1));
    b.phase.push_back(2 * kPi * u(rng));
  }
  return b;
}

template <class F>
ErrorCode error_code_of(F&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  throw std::logic_error("expected an Error");
}

}  // namespace tshape::testing
