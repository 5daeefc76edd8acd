#include <doctest.h>

#include <cmath>
#include <complex>
#include <cstdio>
#include <filesystem>
#include <random>

#include "vortexlab/errors.hpp"
#include "vortexlab/field.hpp"
#include "vortexlab/grid.hpp"
#include "vortexlab/norms.hpp"
#include "vortexlab/snapshot.hpp"
#include "vortexlab/spectral.hpp"

using namespace vortexlab;

namespace {

ScalarField fill(const Grid& g, double (*fn)(double, double), double t = 0.0) {
  ScalarField f(g, t);
  for (std::uint32_t i = 0; i < g.n_points; ++i) {
    for (std::uint32_t j = 0; j < g.n_points; ++j) {
      f.at(i, j) = fn(g.x(i), g.y(j));
    }
  }
  return f;
}

ScalarField random_band_limited(const Grid& g, std::uint64_t seed,
                                int band = 5) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(-1.0, 1.0);
  ScalarField f(g, 0.0);
  const double kappa = 2.0 * M_PI / g.side_length;
  for (int k1 = 0; k1 <= band; ++k1) {
    for (int k2 = -band; k2 <= band; ++k2) {
      if ((k1 == 0 && k2 <= 0)) continue;
      const double a = unif(rng);
      const double ph = M_PI * unif(rng);
      for (std::uint32_t i = 0; i < g.n_points; ++i) {
        for (std::uint32_t j = 0; j < g.n_points; ++j) {
          f.at(i, j) +=
              a * std::cos(kappa * (k1 * g.x(i) + k2 * g.y(j)) + ph);
        }
      }
    }
  }
  return f;
}

}  // namespace

TEST_CASE("grid layout and wavenumber convention") {
  const Grid g = make_grid(8, 2.0 * M_PI);
  CHECK(g.size() == 64);
  CHECK(g.h() == doctest::Approx(2.0 * M_PI / 8));
  CHECK(g.x(0) == 0.0);
  CHECK(g.y(3) == doctest::Approx(3.0 * g.h()));
  CHECK(g.idx(2, 5) == 2 * 8 + 5);

  CHECK(wavenumber(0, 8) == 0);
  CHECK(wavenumber(3, 8) == 3);
  CHECK(wavenumber(4, 8) == -4);
  CHECK(wavenumber(7, 8) == -1);

  CHECK_THROWS_AS(make_grid(12, 1.0), ValidationError);
  CHECK_THROWS_AS(make_grid(4, 1.0), ValidationError);
  CHECK_THROWS_AS(make_grid(64, -1.0), ValidationError);
  CHECK_THROWS_AS(make_grid(64, 1.0, 1.5), ValidationError);
}

TEST_CASE("torus distance wraps around the box") {
  const Grid g = make_grid(16, 10.0);
  CHECK(torus_distance(g, 1.0, 1.0, 9.5, 1.0) == doctest::Approx(1.5));
  CHECK(torus_distance(g, 0.5, 0.5, 9.5, 9.5) ==
        doctest::Approx(std::sqrt(2.0)));
  CHECK(torus_distance(g, 3.0, 4.0, 3.0, 4.0) == 0.0);
}

TEST_CASE("integrate and lp_norm match closed forms") {
  const Grid g = make_grid(64, 2.0 * M_PI);
  const ScalarField f =
      fill(g, [](double x, double) { return std::sin(x) * std::sin(x); });
  // Trapezoid quadrature of a trig polynomial below the Nyquist band is
  // exact on the periodic grid.
  CHECK(integrate(f) == doctest::Approx(2.0 * M_PI * M_PI).epsilon(1e-13));

  const ScalarField s = fill(g, [](double x, double) { return std::sin(x); });
  CHECK(lp_norm(s, 2.0) ==
        doctest::Approx(M_PI * std::sqrt(2.0)).epsilon(1e-13));
  CHECK(lp_norm(s, std::numeric_limits<double>::infinity()) ==
        doctest::Approx(1.0).epsilon(1e-12));
  CHECK(max_abs(s) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK_THROWS_AS(lp_norm(s, 0.5), ValidationError);

  VectorField u(g, 0.0);
  for (std::size_t k = 0; k < g.size(); ++k) {
    u.x[k] = 3.0;
    u.y[k] = 4.0;
  }
  // |u| = 5 everywhere.
  CHECK(lp_norm(u, 2.0) == doctest::Approx(5.0 * g.side_length).epsilon(1e-13));
  CHECK(max_magnitude(u) == doctest::Approx(5.0));
}

TEST_CASE("inner product is the L2 pairing") {
  const Grid g = make_grid(32, 2.0 * M_PI);
  const ScalarField a = fill(g, [](double x, double) { return std::sin(x); });
  const ScalarField b =
      fill(g, [](double x, double y) { return std::sin(x) + std::cos(y); });
  // <sin x, sin x + cos y> = |sin x|^2 = 2 pi^2.
  CHECK(inner_product(a, b) ==
        doctest::Approx(2.0 * M_PI * M_PI).epsilon(1e-13));

  const Grid other = make_grid(64, 2.0 * M_PI);
  CHECK_THROWS_AS(inner_product(a, ScalarField(other)), ValidationError);
}

TEST_CASE("forward transform places pure modes where documented") {
  const Grid g = make_grid(32, 2.0 * M_PI);
  const ScalarField s = fill(g, [](double x, double) { return std::sin(x); });
  const Spectrum sh = spectral::forward(s);
  // sin(x) = -i/2 e^{ix} + i/2 e^{-ix}.
  const std::complex<double> plus = sh.coeffs[g.idx(1, 0)];
  const std::complex<double> minus = sh.coeffs[g.idx(31, 0)];
  CHECK(std::abs(plus - std::complex<double>(0.0, -0.5)) < 1e-14);
  CHECK(std::abs(minus - std::complex<double>(0.0, 0.5)) < 1e-14);
  CHECK(std::abs(sh.coeffs[g.idx(0, 0)]) < 1e-15);
  CHECK(spectral::is_conjugate_symmetric(sh));
}

TEST_CASE("transforms round-trip and satisfy Parseval") {
  const Grid g = make_grid(64, 7.0);
  const ScalarField f = random_band_limited(g, 11);
  const Spectrum fh = spectral::forward(f);
  const ScalarField back = spectral::inverse(fh);
  double worst = 0.0;
  for (std::size_t k = 0; k < g.size(); ++k) {
    worst = std::max(worst, std::fabs(back.values[k] - f.values[k]));
  }
  CHECK(worst < 1e-13 * max_abs(f));

  // h^2 sum |f|^2 == L^2 sum |f_hat|^2 under the documented normalization.
  double spec_sum = 0.0;
  for (const std::complex<double>& c : fh.coeffs) spec_sum += std::norm(c);
  const double phys = lp_norm(f, 2.0);
  CHECK(phys * phys ==
        doctest::Approx(g.side_length * g.side_length * spec_sum)
            .epsilon(1e-12));
}

TEST_CASE("dealias projects and never increases the L2 norm") {
  const Grid g = make_grid(32, 2.0 * M_PI);
  ScalarField f = random_band_limited(g, 7, 15);  // energy beyond the cutoff
  Spectrum fh = spectral::forward(f);
  const Spectrum cut = spectral::dealias(fh);

  double before = 0.0, after = 0.0;
  for (const auto& c : fh.coeffs) before += std::norm(c);
  for (const auto& c : cut.coeffs) after += std::norm(c);
  CHECK(after <= before * (1.0 + 1e-15));

  const std::uint32_t n = g.n_points;
  const double cutoff = g.dealias_fraction * (n / 2.0);
  for (std::uint32_t i = 0; i < n; ++i) {
    for (std::uint32_t j = 0; j < n; ++j) {
      const int k1 = wavenumber(i, n);
      const int k2 = wavenumber(j, n);
      if (std::max(std::abs(k1), std::abs(k2)) > cutoff) {
        CHECK(std::abs(cut.coeffs[g.idx(i, j)]) == 0.0);
      }
    }
  }

  // Idempotent.
  Spectrum twice = cut;
  spectral::dealias_in_place(twice);
  for (std::size_t k = 0; k < g.size(); ++k) {
    CHECK(twice.coeffs[k] == cut.coeffs[k]);
  }
}

TEST_CASE("spectral derivatives are exact on resolved modes") {
  const Grid g = make_grid(64, 2.0 * M_PI);
  const ScalarField f =
      fill(g, [](double x, double y) { return std::sin(3.0 * x) * std::cos(2.0 * y); });
  const VectorField grad = spectral::gradient(f);
  double worst = 0.0;
  for (std::uint32_t i = 0; i < g.n_points; ++i) {
    for (std::uint32_t j = 0; j < g.n_points; ++j) {
      const double gx = 3.0 * std::cos(3.0 * g.x(i)) * std::cos(2.0 * g.y(j));
      const double gy = -2.0 * std::sin(3.0 * g.x(i)) * std::sin(2.0 * g.y(j));
      worst = std::max(worst, std::fabs(grad.x[g.idx(i, j)] - gx));
      worst = std::max(worst, std::fabs(grad.y[g.idx(i, j)] - gy));
    }
  }
  CHECK(worst < 1e-12);
}

TEST_CASE("local lp distance counts the torus ball") {
  const Grid g = make_grid(128, 10.0);
  ScalarField one(g, 0.0);
  for (double& v : one.values) v = 1.0;
  const ScalarField zero(g, 0.0);
  const double r = 2.0;
  // L1 distance of 1 vs 0 over the ball ~ disc area, up to cell granularity.
  const double area = local_lp_distance(one, zero, 1.0, 5.0, 5.0, r);
  CHECK(area == doctest::Approx(M_PI * r * r).epsilon(0.05));
  CHECK_THROWS_AS(local_lp_distance(one, zero, 1.0, 5.0, 5.0, 6.0),
                  ValidationError);
  CHECK_THROWS_AS(local_lp_distance(one, zero, 1.0, 5.0, 5.0, 0.0),
                  ValidationError);
}

TEST_CASE("snapshots round-trip bit for bit") {
  namespace fs = std::filesystem;
  const fs::path dir = fs::temp_directory_path() / "vortexlab_snapshot_test";
  fs::create_directories(dir);

  const Grid g = make_grid(16, 3.5);
  const ScalarField f = random_band_limited(g, 3, 3);
  ScalarField tagged = f;
  tagged.time = 0.625;
  const std::string spath = (dir / "scalar.vrt").string();
  snapshot::save(tagged, spath);
  CHECK(snapshot::peek_kind(spath) == snapshot::Kind::scalar);
  const ScalarField sback = snapshot::load_scalar(spath);
  CHECK(sback.time == 0.625);
  CHECK(sback.grid.n_points == 16);
  CHECK(sback.grid.side_length == 3.5);
  for (std::size_t k = 0; k < g.size(); ++k) {
    CHECK(sback.values[k] == tagged.values[k]);  // exact, not approximate
  }

  VectorField u(g, 1.25);
  for (std::size_t k = 0; k < g.size(); ++k) {
    u.x[k] = f.values[k];
    u.y[k] = -2.0 * f.values[k];
  }
  const std::string vpath = (dir / "vector.vrt").string();
  snapshot::save(u, vpath);
  CHECK(snapshot::peek_kind(vpath) == snapshot::Kind::vector);
  const VectorField uback = snapshot::load_vector(vpath);
  CHECK(uback.time == 1.25);
  for (std::size_t k = 0; k < g.size(); ++k) {
    CHECK(uback.x[k] == u.x[k]);
    CHECK(uback.y[k] == u.y[k]);
  }

  CHECK_THROWS_AS(snapshot::load_scalar((dir / "missing.vrt").string()),
                  IoError);
  CHECK_THROWS_AS(snapshot::load_vector(spath), IoError);
  fs::remove_all(dir);
}

TEST_CASE("validation rejects malformed fields") {
  const Grid g = make_grid(16, 1.0);
  ScalarField f(g, 0.0);
  f.values[5] = std::numeric_limits<double>::quiet_NaN();
  CHECK_THROWS_AS(spectral::forward(f), ValidationError);
  CHECK_THROWS_AS(require_finite(f.values, "test"), ValidationError);
}
