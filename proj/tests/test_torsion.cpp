#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "support.hpp"
#include "torsionshape/oracle.hpp"
#include "torsionshape/torsion.hpp"

using namespace tshape;
using namespace tshape::testing;

namespace {

double max_ball_error(const GridSpec& g, double radius) {
  const Domain d = build_domain(g, seeds::ball({}, radius));
  const StressField u = solve_torsion(d);
  double err = 0;
  for (int j = 0; j <= g.ny; ++j)
    for (int i = 0; i <= g.nx; ++i)
      if (d.inside(i, j)) {
        const Vec2 p = g.node(i, j);
        err = std::max(err, std::abs(u.values(i, j) - (radius * radius - dot(p, p)) / 4));
      }
  return err;
}

// Centre value of the torsion function of the unit square from its double
// sine series: u = sum over odd m, n of 16 / (pi^4 m n (m^2 + n^2)) sin sin.
double square_centre_series(int terms) {
  double s = 0;
  for (int m = 1; m <= terms; m += 2)
    for (int n = 1; n <= terms; n += 2) {
      const double sign = (((m - 1) / 2 + (n - 1) / 2) % 2) ? -1.0 : 1.0;
      s += sign * 16.0 / (std::pow(kPi, 4) * m * n * (m * m + n * n));
    }
  return s;
}

double max_value(const StressField& u) {
  double m = 0;
  for (double v : u.values.values()) m = std::max(m, v);
  return m;
}

}  // namespace

TEST_CASE("unit ball solve") {
  const GridSpec g = GridSpec::square(320, 1.25);  // h = 1/128
  const Domain d = build_domain(g, seeds::ball({}, 1.0));
  const StressField u = solve_torsion(d);
  CHECK(u.values(160, 160) == doctest::Approx(0.25).epsilon(1e-3));
  CHECK(max_ball_error(g, 1.0) <= 1e-3);
  CHECK(u.stats.relative_residual <= 1e-10);
  CHECK_FALSE(u.stats.jacobi_fallback);
  CHECK(u.stats.unknowns == d.inside_count());
}

TEST_CASE("convergence order on the unit ball") {
  const double e1 = max_ball_error(GridSpec::square(128, 2.0), 1.0);
  const double e2 = max_ball_error(GridSpec::square(256, 2.0), 1.0);
  const double e3 = max_ball_error(GridSpec::square(512, 2.0), 1.0);
  CHECK(std::log2(e1 / e2) >= 1.0);
  CHECK(std::log2(e2 / e3) >= 1.0);
}

TEST_CASE("unit square against the series oracle") {
  const double oracle = square_centre_series(401);
  CHECK(oracle == doctest::Approx(0.0737).epsilon(2e-3));
  const Domain d = build_domain(GridSpec::square(256, 1.0), seeds::rectangle({}, 0.5, 0.5));
  CHECK(std::abs(max_value(solve_torsion(d)) - oracle) <= 1e-3);
  // Off-grid placement of the corners.
  const Domain shifted = build_domain(GridSpec::square(250, 1.0), seeds::rectangle({0.013, -0.021}, 0.5, 0.5));
  CHECK(std::abs(max_value(solve_torsion(shifted)) - oracle) <= 1e-3);
}

TEST_CASE("ball of radius 2") {
  const GridSpec g = GridSpec::square(320, 2.5);
  const StressField u = solve_torsion(build_domain(g, seeds::ball({}, 2.0)));
  CHECK(u.values(160, 160) == doctest::Approx(1.0).epsilon(1e-3));
  int valid = 0;
  for (const auto& s : boundary_gradient(u)) {
    if (!s.valid) continue;
    ++valid;
    REQUIRE(std::abs(s.grad - 1.0) <= 2e-2);
  }
  CHECK(valid > 0);
}

TEST_CASE("energy and constraint") {
  const GridSpec g = GridSpec::square(256, 2.0);
  const Domain b1 = build_domain(g, seeds::ball({}, 1.0));
  const Domain b15 = build_domain(g, seeds::ball({}, 1.5));
  const StressField u1 = solve_torsion(b1);
  CHECK(energy_J(u1) == doctest::Approx(-kPi / 16).epsilon(1e-3));
  CHECK(energy_J(solve_torsion(b15)) == doctest::Approx(-0.99402).epsilon(1e-3));
  CHECK(phi_constraint(Weight::radial(1.0, 2.0), b1) == doctest::Approx(kPi / 3).epsilon(1e-3));
  for (double k : {0.5, 1.7})
    for (double alpha : {1.5, 2.0, 3.0}) {
      const double closed = k * k * 2 * kPi * std::pow(1.5, 2 * alpha + 2) / (2 * alpha + 2);
      CHECK(closed == doctest::Approx(oracle::ball_energy_phi(1.5, k, alpha, 2).phi).epsilon(1e-12));
      CHECK(phi_constraint(Weight::radial(k, alpha), b15) == doctest::Approx(closed).epsilon(1e-3));
    }
}

TEST_CASE("boundary gradient on the unit ball") {
  const StressField u = solve_torsion(build_domain(GridSpec::square(256, 2.0), seeds::ball({}, 1.0)));
  const auto grads = boundary_gradient(u);
  for (const auto& s : grads) {
    REQUIRE(s.valid);
    REQUIRE(std::abs(s.grad - 0.5) <= 2e-2);
  }
}

TEST_CASE("residuals") {
  const GridSpec g = GridSpec::square(256, 2.0);
  const StressField u = solve_torsion(build_domain(g, seeds::ball({}, 1.0)));
  const Weight w = Weight::radial(0.5, 2.0);
  const Residual r = residual_fbp(u, w, 1.0);
  CHECK(r.sup <= 5e-2);
  CHECK(r.l2 <= r.sup);
  CHECK(r.starved == 0);

  const auto grads = boundary_gradient(u);
  double gmax = 0, wmax = 0;
  for (const auto& s : grads) {
    gmax = std::max(gmax, s.grad);
    wmax = std::max(wmax, w(s.sample.point));
  }
  CHECK(residual_fbp(grads, w, 0.0).sup == doctest::Approx(gmax / wmax));
  CHECK(error_code_of([&] { residual_fbp(grads, w, -1.0); }) == ErrorCode::BadScale);

  // Mismatched weight: large but finite.
  CHECK(residual_fbp(grads, Weight::radial(2.0, 2.0), 1.0).sup > 0.5);
}

TEST_CASE("starved stencils") {
  const GridSpec g = GridSpec::square(256, 2.0);
  const Domain thin = build_domain(g, seeds::rectangle({}, 1.0, 0.01));
  const StressField u = solve_torsion(thin);
  const auto grads = boundary_gradient(u);
  int valid = 0;
  for (const auto& s : grads) valid += s.valid;
  CHECK(valid == 0);
  CHECK(error_code_of([&] { residual_fbp(grads, Weight::radial(0.5, 2.0), 1.0); }) == ErrorCode::StencilStarved);
}

TEST_CASE("solver error paths") {
  const GridSpec g = GridSpec::square(64, 2.0);
  const Domain empty(NodeField(g, 1.0), false, false);
  CHECK(error_code_of([&] { solve_torsion(empty); }) == ErrorCode::EmptyDomain);
  SolveOptions capped;
  capped.cap_factor = 0;
  CHECK(error_code_of([&] { solve_torsion(build_domain(g, seeds::ball({}, 1.0)), capped); }) ==
        ErrorCode::SolverDiverged);
}

TEST_CASE("warm start converges to the same field") {
  const GridSpec g = GridSpec::square(128, 2.0);
  const Domain d = build_domain(g, seeds::ellipse({}, 1.3, 0.8));
  const StressField cold = solve_torsion(d);
  const StressField guess = solve_torsion(build_domain(g, seeds::ellipse({}, 1.25, 0.82)));
  SolveOptions opts;
  opts.initial_guess = &guess.values;
  const StressField warm = solve_torsion(d, opts);
  double diff = 0;
  for (std::size_t k = 0; k < g.node_count(); ++k)
    diff = std::max(diff, std::abs(warm.values.values()[k] - cold.values.values()[k]));
  CHECK(diff <= 1e-8);
}

TEST_CASE("objective") {
  CHECK(objective_exponent(2.0) == doctest::Approx(2.0 / 3.0));
  const GridSpec g = GridSpec::square(256, 2.0);
  const Weight w = Weight::radial(1.0, 2.0);
  const Domain b = build_domain(g, seeds::ball({}, 1.0));
  const double obj = objective_scale_invariant(w, b, solve_torsion(b));
  CHECK(obj == doctest::Approx(-(kPi / 16) * std::pow(kPi / 3, -2.0 / 3.0)).epsilon(1e-2));
  CHECK(obj == doctest::Approx(-0.1904).epsilon(1e-2));
  const Domain blob = build_domain(g, seeds::star({0.1, 0.0}, [](double t) { return 0.9 + 0.15 * std::cos(3 * t); }));
  const double base = objective_scale_invariant(w, blob, solve_torsion(blob));
  for (double t : {0.8, 1.37}) {
    const Domain s = scale_domain(blob, t);
    CHECK(objective_scale_invariant(w, s, solve_torsion(s)) == doctest::Approx(base).epsilon(1e-2));
  }
  const FunctionalReport rep = functional_report(w, solve_torsion(b));
  CHECK(rep.J < 0);
  CHECK(rep.phi > 0);
  CHECK(rep.objective == doctest::Approx(obj));
}

TEST_CASE("stress field properties on random blobs") {
  std::mt19937_64 rng(31);
  const GridSpec g = GridSpec::square(96, 2.0);
  const double h = g.h();
  const Weight w(2.0, FourierProfile{{1.0, 0.2}, {0.0, 0.1}});
  for (int trial = 0; trial < 30; ++trial) {
    const Blob blob = random_blob(rng, 0.6, 1.0, 0.2, 0.25);
    const Domain d = build_domain(g, blob.seed());
    const StressField u = solve_torsion(d);
    double umin = 1e300, lap_err = 0;
    for (int j = 1; j < g.ny; ++j)
      for (int i = 1; i < g.nx; ++i) {
        if (!d.inside(i, j)) continue;
        umin = std::min(umin, u.values(i, j));
        if (d.inside(i + 1, j) && d.inside(i - 1, j) && d.inside(i, j + 1) && d.inside(i, j - 1)) {
          const double lap = (4 * u.values(i, j) - u.values(i + 1, j) - u.values(i - 1, j) - u.values(i, j + 1) -
                              u.values(i, j - 1)) / (h * h);
          lap_err = std::max(lap_err, std::abs(lap - 1));
        }
      }
    CHECK(umin >= -1e-12);
    CHECK(lap_err <= 1e-6);

    // Domain monotonicity: adding a ball can only lower J.
    const Domain bigger = build_domain(g, seeds::unite(blob.seed(), seeds::ball({0.3, 0.2}, 0.5)));
    const double j1 = energy_J(u), j2 = energy_J(solve_torsion(bigger));
    CHECK(j1 >= j2 - 1e-3 * std::abs(j1));

    // Weighted isoperimetric ratio under homotheties.
    const double ratio = weighted_isoperimetric_ratio(w, d);
    const double t = 0.75 + 0.02 * trial;
    CHECK(weighted_isoperimetric_ratio(w, scale_domain(d, t)) == doctest::Approx(ratio).epsilon(2e-2));
  }
}

TEST_CASE("symmetrization lowers the energy") {
  std::mt19937_64 rng(47);
  const GridSpec g = GridSpec::square(96, 2.0);
  for (int trial = 0; trial < 20; ++trial) {
    const Blob blob = random_blob(rng, 0.6, 1.0, 0.25, 0.3);
    const Domain d = build_domain(g, blob.seed());
    const double j = energy_J(solve_torsion(d));
    const double tol = 5e-3 * std::abs(j);
    CHECK(energy_J(solve_torsion(schwarz_symmetrize(d))) <= j + tol);
    CHECK(energy_J(solve_torsion(steiner_symmetrize(d, 0))) <= j + tol);
    CHECK(energy_J(solve_torsion(steiner_symmetrize(d, 1))) <= j + tol);
  }
}

TEST_CASE("square root of the stress function is concave on convex domains") {
  const GridSpec g = GridSpec::square(128, 2.0);
  std::mt19937_64 rng(5);
  for (const Seed& seed : {seeds::ball({}, 1.0), seeds::ellipse({}, 1.4, 0.7)}) {
    const Domain d = build_domain(g, seed);
    const StressField u = solve_torsion(d);
    std::uniform_int_distribution<int> pick(0, g.nx);
    int trials = 0;
    double worst = 0;
    while (trials < 2000) {
      const int i1 = pick(rng), j1 = pick(rng), i2 = pick(rng), j2 = pick(rng);
      if ((i1 + i2) % 2 || (j1 + j2) % 2 || !d.inside(i1, j1) || !d.inside(i2, j2)) continue;
      const int im = (i1 + i2) / 2, jm = (j1 + j2) / 2;
      const double s = std::sqrt(u.values(im, jm)) -
                       0.5 * (std::sqrt(u.values(i1, j1)) + std::sqrt(u.values(i2, j2)));
      worst = std::min(worst, s);
      ++trials;
    }
    CHECK(worst >= -1e-6);
  }
}
