#include <doctest.h>

#include <cmath>

#include "vortexlab/errors.hpp"
#include "vortexlab/grid.hpp"
#include "vortexlab/initial_data.hpp"
#include "vortexlab/norms.hpp"
#include "vortexlab/ns_solver.hpp"
#include "vortexlab/renorm.hpp"
#include "vortexlab/sources.hpp"

using namespace vortexlab;

namespace {

ScalarField cellular(const Grid& g, double amplitude) {
  const double k = 2.0 * M_PI / g.side_length;
  ScalarField f(g, 0.0);
  for (std::uint32_t i = 0; i < g.n_points; ++i) {
    for (std::uint32_t j = 0; j < g.n_points; ++j) {
      f.at(i, j) =
          2.0 * amplitude * std::sin(k * g.x(i)) * std::sin(k * g.y(j));
    }
  }
  return f;
}

}  // namespace

TEST_CASE("composition functions match their formulas and flags") {
  const BetaFunction soft = BetaFunction::arctan_soft();
  CHECK(soft(0.7) == doctest::Approx(std::atan(0.7)).epsilon(1e-15));
  CHECK(soft.bounded_c1);
  CHECK_FALSE(soft.convex);

  const BetaFunction rat = BetaFunction::bounded_rational();
  CHECK(rat(2.0) == doctest::Approx(2.0 / 5.0).epsilon(1e-15));
  CHECK(rat.slope(2.0) == doctest::Approx((1.0 - 4.0) / 25.0).epsilon(1e-12));
  CHECK(rat.bounded_c1);

  const BetaFunction clip = BetaFunction::smooth_clip(3.0);
  CHECK(clip(2.0) == doctest::Approx(3.0 * std::tanh(2.0 / 3.0)).epsilon(1e-15));
  CHECK(clip(2.0) < 2.0);
  CHECK(clip(100.0) <= 3.0);  // saturates at the clip level
  CHECK(clip(0.001) == doctest::Approx(0.001).epsilon(1e-6));
  CHECK(clip.bounded_c1);

  const BetaFunction quad = BetaFunction::power_convex(2.0);
  CHECK(quad(-1.5) == doctest::Approx(2.25).epsilon(1e-15));
  CHECK(quad.convex);
  CHECK_FALSE(quad.bounded_c1);

  CHECK_THROWS_AS(BetaFunction::smooth_clip(0.0), ValidationError);
  CHECK_THROWS_AS(BetaFunction::power_convex(0.5), ValidationError);
}

TEST_CASE("flag verifier accepts the bank and rejects a mislabeled flag") {
  for (const BetaFunction& beta : default_beta_bank(2.0)) {
    CHECK(verify_beta_flags(beta, 10.0));
  }
  BetaFunction lying = BetaFunction::arctan_soft();
  lying.convex = true;  // arctan is not convex on the line
  CHECK_FALSE(verify_beta_flags(lying, 10.0));
  BetaFunction unbounded = BetaFunction::power_convex(2.0);
  unbounded.bounded_c1 = true;  // |s|^2 is not bounded
  CHECK_FALSE(verify_beta_flags(unbounded, 10.0));
}

TEST_CASE("beta integral of a power law is the Lp mass") {
  const Grid g = make_grid(64, 8.0 * M_PI);
  InitialDatumSpec spec;
  spec.kind = DatumKind::custom_modes;
  spec.seed = 3;
  const ScalarField w = make_rough_datum(g, spec);

  const BetaFunction quad = BetaFunction::power_convex(2.0);
  const double n2 = lp_norm(w, 2.0);
  CHECK(beta_integral(w, quad) == doctest::Approx(n2 * n2).epsilon(1e-12));

  const BetaFunction p15 = BetaFunction::power_convex(1.5);
  const double n15 = lp_norm(w, 1.5);
  CHECK(beta_integral(w, p15) ==
        doctest::Approx(std::pow(n15, 1.5)).epsilon(1e-12));
}

TEST_CASE("odd composition of an odd field integrates to zero") {
  const Grid g = make_grid(64, 2.0 * M_PI);
  ScalarField f(g, 0.0);
  for (std::uint32_t i = 0; i < g.n_points; ++i) {
    for (std::uint32_t j = 0; j < g.n_points; ++j) {
      f.at(i, j) = std::sin(g.x(i));
    }
  }
  // atan(sin(x + pi)) = -atan(sin x): samples cancel pairwise on the grid.
  CHECK(std::fabs(beta_integral(f, BetaFunction::arctan_soft())) < 1e-13);
}

TEST_CASE("superlevel measure of a patch is its area") {
  const Grid g = make_grid(128, 8.0 * M_PI);
  InitialDatumSpec spec;
  spec.kind = DatumKind::vortex_patch;
  spec.amplitude = 3.0;
  spec.support_radius = 2.0;
  const ScalarField patch = make_rough_datum(g, spec);

  const double area = M_PI * spec.support_radius * spec.support_radius;
  CHECK(distribution_function(patch, 1.5) == doctest::Approx(area).epsilon(0.05));
  CHECK(distribution_function(patch, 0.0) ==
        doctest::Approx(area).epsilon(0.05));
  // Strict comparison: nothing exceeds the patch height itself.
  CHECK(distribution_function(patch, 3.0) == 0.0);
  CHECK(distribution_function(patch, 6.0) == 0.0);
  CHECK_THROWS_AS(distribution_function(patch, -1.0), ValidationError);
}

TEST_CASE("drift series is zero-based and flat on a conserved quantity") {
  const Grid g = make_grid(32, 2.0 * M_PI);
  SolverConfig sc;
  sc.nu = 0.0;  // cellular state is stationary when inviscid
  sc.dt = 0.01;
  sc.t_final = 0.3;
  const Trajectory traj = run_forward(cellular(g, 1.0), sc);

  for (const BetaFunction& beta : default_beta_bank(2.0)) {
    const std::vector<double> drift = renorm_drift(traj, beta);
    REQUIRE(drift.size() == traj.snapshots.size());
    CHECK(drift[0] == 0.0);
    for (double d : drift) {
      CHECK(std::fabs(d) < 1e-10);
    }
  }
}

TEST_CASE("viscous decay shows up as strictly negative drift") {
  const Grid g = make_grid(32, 2.0 * M_PI);
  SolverConfig sc;
  sc.nu = 0.1;
  sc.dt = 0.01;
  sc.t_final = 0.5;
  const Trajectory traj = run_forward(cellular(g, 1.0), sc);

  const BetaFunction quad = BetaFunction::power_convex(2.0);
  const std::vector<double> drift = renorm_drift(traj, quad);
  CHECK(drift.back() < -1e-3);
  CHECK(dissipation_rise(traj, quad) <= 1e-12);
  CHECK_THROWS_AS(dissipation_rise(traj, BetaFunction::arctan_soft()),
                  ValidationError);
}

TEST_CASE("weak pairings track the exact decay of a cellular run") {
  const Grid g = make_grid(32, 2.0 * M_PI);
  SolverConfig sc;
  sc.nu = 0.05;
  sc.dt = 0.01;
  sc.t_final = 0.5;
  const Trajectory traj = run_forward(cellular(g, 1.0), sc);

  const std::vector<TestFunction> tests = default_test_bank(g);
  const PairingTable table = weak_star_pairings(traj, tests);
  REQUIRE(table.test_names.size() == tests.size());
  REQUIRE(table.at_time.size() == traj.snapshots.size());
  REQUIRE(table.integrated.size() == tests.size());

  // Every pairing of the cellular state decays on the exp(-2 nu t) envelope,
  // so each column is the initial pairing times that envelope.
  for (std::size_t j = 0; j < tests.size(); ++j) {
    const double base = table.at_time.front()[j];
    for (std::size_t k = 0; k < traj.snapshots.size(); ++k) {
      const double t = table.time[k];
      const double want = base * std::exp(-2.0 * sc.nu * t);
      CHECK(table.at_time[k][j] ==
            doctest::Approx(want).epsilon(1e-9).scale(std::fabs(base) + 1.0));
    }
    // Time-integrated pairing: base * (1 - e^{-2 nu T}) / (2 nu), up to
    // trapezoid error O(dt^2).
    const double exact =
        base * (1.0 - std::exp(-2.0 * sc.nu * sc.t_final)) / (2.0 * sc.nu);
    CHECK(table.integrated[j] == doctest::Approx(exact)
                                     .epsilon(1e-4)
                                     .scale(std::fabs(base) + 1.0));
  }

  // The constant test function pairs with the (conserved, zero) mean.
  bool found_const = false;
  for (std::size_t j = 0; j < tests.size(); ++j) {
    if (table.test_names[j] == "const_one") {
      found_const = true;
      for (std::size_t k = 0; k < traj.snapshots.size(); ++k) {
        CHECK(std::fabs(table.at_time[k][j]) < 1e-11);
      }
    }
  }
  CHECK(found_const);
}

TEST_CASE("lp distance series has the closed form on twin cellular runs") {
  const Grid g = make_grid(32, 2.0 * M_PI);
  const double T = 0.5;
  const double dt = 0.01;
  SolverConfig a;
  a.nu = 0.08;
  a.dt = dt;
  a.t_final = T;
  SolverConfig b = a;
  b.nu = 0.02;
  const ScalarField w0 = cellular(g, 1.0);
  const Trajectory high = run_forward(w0, a);
  const Trajectory low = run_forward(w0, b);

  const std::vector<double> dist = lp_distance_series(high, low, 2.0);
  REQUIRE(dist.size() == high.snapshots.size());
  const double n0 = lp_norm(w0, 2.0);
  CHECK(dist[0] == 0.0);  // identical projected datum, identical bits
  for (std::size_t k = 0; k < dist.size(); ++k) {
    const double t = high.snapshots[k].time;
    const double want =
        n0 * std::fabs(std::exp(-2.0 * a.nu * t) - std::exp(-2.0 * b.nu * t));
    CHECK(dist[k] == doctest::Approx(want).epsilon(1e-11).scale(n0));
  }

  SolverConfig c = a;
  c.dt = dt / 2.0;
  const Trajectory off_mesh = run_forward(w0, c);
  CHECK_THROWS_AS(lp_distance_series(high, off_mesh, 2.0), ValidationError);
}

TEST_CASE("test bank geometry: eleven localized probes plus the constant") {
  const Grid g = make_grid(64, 8.0 * M_PI);
  const std::vector<TestFunction> bank = default_test_bank(g);
  CHECK(bank.size() == 11);
  std::size_t constants = 0;
  for (const TestFunction& t : bank) {
    REQUIRE(t.field.values.size() == g.size());
    if (t.name == "const_one") {
      ++constants;
      for (double v : t.field.values) CHECK(v == 1.0);
    } else {
      // Localized probes vanish on most of the torus.
      CHECK(distribution_function(t.field, 1e-14) <
            0.5 * g.side_length * g.side_length);
    }
  }
  CHECK(constants == 1);
}
