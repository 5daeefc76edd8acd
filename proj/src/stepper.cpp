#include "vortexlab/stepper.hpp"

#include <cmath>
#include <string>

#include "vortexlab/errors.hpp"
#include "vortexlab/spectral.hpp"

namespace vortexlab {

namespace {

// exp(-nu * kappa^2 * tau) table over modes, kappa = 2*pi*k/L.
std::vector<double> diffusion_table(const Grid& g, double nu, double tau) {
  const std::uint32_t n = g.n_points;
  const double two_pi_over_L = 2.0 * M_PI / g.side_length;
  std::vector<double> table(g.size());
  for (std::uint32_t i = 0; i < n; ++i) {
    const int k1 = wavenumber(i, n);
    for (std::uint32_t j = 0; j < n; ++j) {
      const int k2 = wavenumber(j, n);
      const double kappa2 = two_pi_over_L * two_pi_over_L *
                            static_cast<double>(k1 * k1 + k2 * k2);
      table[g.idx(i, j)] = std::exp(-nu * kappa2 * tau);
    }
  }
  return table;
}

void multiply_table(Spectrum& s, const std::vector<double>& table) {
  for (std::size_t k = 0; k < s.coeffs.size(); ++k) s.coeffs[k] *= table[k];
}

Spectrum times_table(const Spectrum& s, const std::vector<double>& table) {
  Spectrum out = s;
  multiply_table(out, table);
  return out;
}

void axpy(Spectrum& y, double alpha, const Spectrum& x) {
  for (std::size_t k = 0; k < y.coeffs.size(); ++k) {
    y.coeffs[k] += alpha * x.coeffs[k];
  }
}

}  // namespace

Ifrk4Engine::Ifrk4Engine(const Grid& grid, double nu, double dt,
                         double advect_sign)
    : grid_(grid), nu_(nu), dt_(dt), sign_(advect_sign) {
  if (std::isnan(nu) || nu < 0.0) {
    throw ValidationError("Ifrk4Engine: nu must be >= 0");
  }
  if (!(dt > 0.0) || !std::isfinite(dt)) {
    throw ValidationError("Ifrk4Engine: dt must be positive and finite");
  }
  if (advect_sign != 1.0 && advect_sign != -1.0) {
    throw ValidationError("Ifrk4Engine: advect_sign must be +1 or -1");
  }
  e_half_ = diffusion_table(grid_, nu_, dt_ / 2.0);
  e_full_ = diffusion_table(grid_, nu_, dt_);
}

namespace {

// Slope A(s) = sign * dealias(F(u . grad inverse(s))), the advection part of
// the RHS in spectral form. u is the frozen stage velocity.
Spectrum advection_slope(const Spectrum& stage, const VectorField& u,
                         double sign) {
  Spectrum sx = stage;
  spectral::derivative_x_in_place(sx);
  Spectrum sy = stage;
  spectral::derivative_y_in_place(sy);
  const ScalarField zx = spectral::inverse(sx);
  const ScalarField zy = spectral::inverse(sy);
  ScalarField prod(stage.grid, stage.time);
  for (std::size_t k = 0; k < prod.values.size(); ++k) {
    prod.values[k] = u.x[k] * zx.values[k] + u.y[k] * zy.values[k];
  }
  Spectrum out = spectral::forward(prod);
  spectral::dealias_in_place(out);
  if (sign != 1.0) {
    for (auto& c : out.coeffs) c *= sign;
  }
  return out;
}

// Transpose of advection_slope as a linear map in the stage state:
// A^T(y) = -sign * Div(u * inverse(dealias(y))) in spectral form. The
// dealias projection moves to the input side; the sign flip is the skewness
// of the spectral derivative.
Spectrum advection_slope_transpose(const Spectrum& y, const VectorField& u,
                                   double sign) {
  Spectrum masked = y;
  spectral::dealias_in_place(masked);
  const ScalarField phi = spectral::inverse(masked);
  ScalarField px(phi.grid, phi.time);
  ScalarField py(phi.grid, phi.time);
  for (std::size_t k = 0; k < phi.values.size(); ++k) {
    px.values[k] = u.x[k] * phi.values[k];
    py.values[k] = u.y[k] * phi.values[k];
  }
  Spectrum qx = spectral::forward(px);
  spectral::derivative_x_in_place(qx);
  Spectrum qy = spectral::forward(py);
  spectral::derivative_y_in_place(qy);
  for (std::size_t k = 0; k < qx.coeffs.size(); ++k) {
    qx.coeffs[k] = -sign * (qx.coeffs[k] + qy.coeffs[k]);
  }
  return qx;
}

}  // namespace

ScalarField Ifrk4Engine::step(const ScalarField& w, double t,
                              const StageVelocityFn& vel,
                              const StageSourceFn* source,
                              StageVelocities* capture) const {
  require_same_grid(w.grid, grid_, "Ifrk4Engine::step");
  for (double v : w.values) {
    if (!std::isfinite(v)) {
      throw NumericalError("Ifrk4Engine::step: non-finite state at t = " +
                           std::to_string(t));
    }
  }

  const double dt = dt_;
  Spectrum what = spectral::forward(w);

  // Stage sources, evaluated once per distinct stage time.
  Spectrum chi_0, chi_half, chi_1;
  const bool has_source = source != nullptr && *source != nullptr;
  if (has_source) {
    chi_0 = spectral::forward((*source)(t));
    chi_half = spectral::forward((*source)(t + dt / 2.0));
    chi_1 = spectral::forward((*source)(t + dt));
  }

  // a = RHS(t, w)
  VectorField ua = vel(t, what);
  Spectrum a = advection_slope(what, ua, sign_);
  if (has_source) axpy(a, 1.0, chi_0);

  // b = RHS(t + dt/2, E(w + dt/2 a))
  Spectrum sb = what;
  axpy(sb, dt / 2.0, a);
  multiply_table(sb, e_half_);
  VectorField ub = vel(t + dt / 2.0, sb);
  Spectrum b = advection_slope(sb, ub, sign_);
  if (has_source) axpy(b, 1.0, chi_half);

  // c = RHS(t + dt/2, E w + dt/2 b)
  Spectrum sc = times_table(what, e_half_);
  axpy(sc, dt / 2.0, b);
  VectorField uc = vel(t + dt / 2.0, sc);
  Spectrum c = advection_slope(sc, uc, sign_);
  if (has_source) axpy(c, 1.0, chi_half);

  // d = RHS(t + dt, E^2 w + dt E c)
  Spectrum sd = times_table(what, e_full_);
  axpy(sd, dt, times_table(c, e_half_));
  VectorField ud = vel(t + dt, sd);
  Spectrum d = advection_slope(sd, ud, sign_);
  if (has_source) axpy(d, 1.0, chi_1);

  // w' = E^2 w + dt/6 (E^2 a + 2 E b + 2 E c + d)
  Spectrum out = times_table(what, e_full_);
  axpy(out, dt / 6.0, times_table(a, e_full_));
  axpy(out, dt / 3.0, times_table(b, e_half_));
  axpy(out, dt / 3.0, times_table(c, e_half_));
  axpy(out, dt / 6.0, d);

  if (capture != nullptr) {
    capture->a = std::move(ua);
    capture->b = std::move(ub);
    capture->c = std::move(uc);
    capture->d = std::move(ud);
  }

  ScalarField next = spectral::inverse(out);
  next.time = t + dt;
  return next;
}

ScalarField Ifrk4Engine::step_transpose(const ScalarField& phi,
                                        const StageVelocities& stages) const {
  require_same_grid(phi.grid, grid_, "Ifrk4Engine::step_transpose");
  const double dt = dt_;
  const Spectrum y = spectral::forward(phi);

  // Reverse-mode pass through the step's computational graph. Cotangents of
  // the stage slopes first (E is self-adjoint, so the tables reapply as-is).
  Spectrum wbar = times_table(y, e_full_);
  Spectrum abar = times_table(y, e_full_);
  for (auto& cc : abar.coeffs) cc *= dt / 6.0;
  Spectrum bbar = times_table(y, e_half_);
  for (auto& cc : bbar.coeffs) cc *= dt / 3.0;
  Spectrum cbar = times_table(y, e_half_);
  for (auto& cc : cbar.coeffs) cc *= dt / 3.0;
  Spectrum dbar = y;
  for (auto& cc : dbar.coeffs) cc *= dt / 6.0;

  // d = A_d(sd), sd = E^2 w + dt E c
  Spectrum sdbar = advection_slope_transpose(dbar, stages.d, sign_);
  axpy(wbar, 1.0, times_table(sdbar, e_full_));
  axpy(cbar, dt, times_table(sdbar, e_half_));

  // c = A_c(sc), sc = E w + dt/2 b
  Spectrum scbar = advection_slope_transpose(cbar, stages.c, sign_);
  axpy(wbar, 1.0, times_table(scbar, e_half_));
  axpy(bbar, dt / 2.0, scbar);

  // b = A_b(sb), sb = E(w + dt/2 a)
  Spectrum sbbar = advection_slope_transpose(bbar, stages.b, sign_);
  Spectrum sbbar_e = times_table(sbbar, e_half_);
  axpy(wbar, 1.0, sbbar_e);
  axpy(abar, dt / 2.0, sbbar_e);

  // a = A_a(w)
  axpy(wbar, 1.0, advection_slope_transpose(abar, stages.a, sign_));

  ScalarField out = spectral::inverse(wbar);
  out.time = phi.time;
  return out;
}

void check_cfl(const VectorField& u, double dt, double cfl_fraction,
               std::size_t step_index) {
  double umax = 0.0;
  for (std::size_t k = 0; k < u.x.size(); ++k) {
    umax = std::max(umax, std::hypot(u.x[k], u.y[k]));
  }
  if (umax <= 0.0) return;
  const double limit = cfl_fraction * u.grid.h() / umax;
  if (dt > limit) {
    throw NumericalError(
        "CFL violation at step " + std::to_string(step_index) + ": dt = " +
        std::to_string(dt) + " exceeds " + std::to_string(limit) +
        " (cfl_fraction " + std::to_string(cfl_fraction) + ", max|u| " +
        std::to_string(umax) + ")");
  }
}

}  // namespace vortexlab
