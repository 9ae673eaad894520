#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <stdexcept>
#include <utility>
#include <vector>

#include "kgz/errors.hpp"
#include "kgz/kgz_model.hpp"
#include "kgz/spectral_field.hpp"
#include "kgz/symbols.hpp"

namespace kgz {

/// One time slice of the Zakharov limit system
///   2i du/dt = Delta u - n u,   d2n/dt2 - Delta n = Delta|u|^2 / 2.
struct ZakharovState {
  SpectralField u_inf;
  SpectralField n_inf;
  SpectralField ndot_inf;
  double time = 0.0;
};

/// Diagonal tables for one Strang step of the reference discretization.
struct ZakharovOperators {
  double tau = 0.0;
  GridPtr grid;
  Multiplier half_kinetic;  // e^{i k^2 tau/4}: free Schroedinger flow over tau/2
  Multiplier cos_w;         // cos(tau |k|)
  Multiplier tsinc_w;       // tau sinc(tau |k|)
  Multiplier wsin_w;        // |k| sin(tau |k|)
  Multiplier w_full;        // (1 - cos(tau |k|))/k^2   = tau^2/2 sinc^2(tau|k|/2)
  Multiplier cos_half;      // cos(tau |k| / 2)
  Multiplier hsinc_w;       // (tau/2) sinc(tau |k| / 2)
  Multiplier w_mid;         // (1 - cos(tau|k|/2))/k^2  = tau^2/8 sinc^2(tau|k|/4)
  Multiplier lap;           // -k^2

  static ZakharovOperators build(GridPtr grid, double tau) {
    if (!(tau > 0.0) || !std::isfinite(tau)) {
      throw std::invalid_argument("ZakharovOperators: tau must be positive");
    }
    const TorusGrid& g = *grid;
    ZakharovOperators ops;
    ops.tau = tau;
    ops.grid = grid;
    ops.half_kinetic.values.resize(g.num_points());
    for (std::size_t s = 0; s < g.num_points(); ++s) {
      const double k = g.wavenumber(s);
      ops.half_kinetic.values[s] = std::polar(1.0, 0.25 * tau * k * k);
    }
    ops.cos_w = symbols::cos_t_bracket0(g, tau);
    ops.tsinc_w = symbols::sinc_t_bracket0(g, tau);
    ops.tsinc_w.scale(tau);
    ops.wsin_w = symbols::bracket0(g) * symbols::sin_t_bracket0(g, tau);
    ops.w_full = make_multiplier(g, [tau](double k) {
      const double s = symbols::sinc(0.5 * tau * std::abs(k));
      return 0.5 * tau * tau * s * s;
    });
    ops.cos_half = symbols::cos_t_bracket0(g, 0.5 * tau);
    ops.hsinc_w = symbols::sinc_t_bracket0(g, 0.5 * tau);
    ops.hsinc_w.scale(0.5 * tau);
    ops.w_mid = make_multiplier(g, [tau](double k) {
      const double s = symbols::sinc(0.25 * tau * std::abs(k));
      return 0.125 * tau * tau * s * s;
    });
    ops.lap = symbols::laplace(g);
    return ops;
  }
};

/// One step of the second-order Strang reference for the Zakharov system.
///
/// Kinetic half-steps (exact free Schroedinger flow) sandwich a middle flow
/// in which |u|^2, and hence the wave forcing Delta|u|^2/2, is an exact
/// invariant: the wave pair (n, ndot) rotates exactly with the frozen
/// forcing, and u picks up the unitary phase exp(i (tau/2) n_mid) with n_mid
/// the exact midpoint value of that wave solution.
inline ZakharovState zakharov_step(const ZakharovState& s, const ZakharovOperators& ops,
                                   double tau) {
  if (ops.tau != tau) throw std::invalid_argument("zakharov_step: operators built for other tau");
  const TorusGrid& g = *ops.grid;
  require_compatible(s.u_inf.grid(), g, "zakharov_step");
  const std::size_t n = g.num_points();

  std::vector<Complex> u(n);
  for (std::size_t k = 0; k < n; ++k) u[k] = ops.half_kinetic.values[k] * s.u_inf.coeff(k);

  std::vector<Complex> u_phys(n);
  dft_for(n).backward(u, u_phys);
  std::vector<Complex> abs2(n);
  for (std::size_t j = 0; j < n; ++j) abs2[j] = Complex(std::norm(u_phys[j]), 0.0);
  std::vector<Complex> f_hat(n);
  dft_for(n).forward(abs2, f_hat);
  for (std::size_t k = 0; k < n; ++k) f_hat[k] = 0.5 * ops.lap.values[k] * f_hat[k];

  // Midpoint wave value under the frozen forcing.
  std::vector<Complex> n_mid(n);
  for (std::size_t k = 0; k < n; ++k) {
    n_mid[k] = ops.cos_half.values[k] * s.n_inf.coeff(k) +
               ops.hsinc_w.values[k] * s.ndot_inf.coeff(k) + ops.w_mid.values[k] * f_hat[k];
  }
  std::vector<Complex> n_mid_phys(n);
  dft_for(n).backward(n_mid, n_mid_phys);
  for (std::size_t j = 0; j < n; ++j) {
    u_phys[j] *= std::polar(1.0, 0.5 * tau * n_mid_phys[j].real());
  }
  dft_for(n).forward(u_phys, u);

  std::vector<Complex> n_new(n), nd_new(n);
  for (std::size_t k = 0; k < n; ++k) {
    n_new[k] = ops.cos_w.values[k] * s.n_inf.coeff(k) +
               ops.tsinc_w.values[k] * s.ndot_inf.coeff(k) + ops.w_full.values[k] * f_hat[k];
    nd_new[k] = -ops.wsin_w.values[k] * s.n_inf.coeff(k) +
                ops.cos_w.values[k] * s.ndot_inf.coeff(k) + ops.tsinc_w.values[k] * f_hat[k];
  }
  detail::project_hermitian_inplace(n_new, g);
  detail::project_hermitian_inplace(nd_new, g);

  for (std::size_t k = 0; k < n; ++k) u[k] = ops.half_kinetic.values[k] * u[k];

  return ZakharovState{SpectralField(ops.grid, std::move(u), false),
                       SpectralField(ops.grid, std::move(n_new), true),
                       SpectralField(ops.grid, std::move(nd_new), true), s.time + tau};
}

inline ZakharovState zakharov_propagate(ZakharovState s, const GridPtr& grid, double tau,
                                        std::int64_t num_steps) {
  if (num_steps < 0) throw std::invalid_argument("zakharov_propagate: num_steps must be >= 0");
  if (num_steps == 0) return s;
  const ZakharovOperators ops = ZakharovOperators::build(grid, tau);
  for (std::int64_t i = 0; i < num_steps; ++i) {
    s = zakharov_step(s, ops, tau);
    if (!all_finite(s.u_inf) || !all_finite(s.n_inf)) {
      throw DivergenceError(0.0, tau, s.time);
    }
  }
  return s;
}

/// Limit initial data: u_inf(0) = z(0) - i c^{-2} dz/dt(0) (plain c^{-2}, not
/// the bracket), with (n, ndot) carried over unchanged.
inline ZakharovState limit_initial(const PhysicalState& p, const ModelParams& params) {
  require_compatible(p.z.grid(), *params.grid, "limit_initial");
  const double inv_c2 = 1.0 / (params.c * params.c);
  std::vector<Complex> u(p.z.size());
  for (std::size_t k = 0; k < u.size(); ++k) {
    u[k] = p.z.coeff(k) - Complex(0.0, inv_c2) * p.zdot.coeff(k);
  }
  return ZakharovState{SpectralField(params.grid, std::move(u), false),
                       hermitian_projection(p.n), hermitian_projection(p.ndot), 0.0};
}

/// Errors of the twisted comparison at a common time t:
///   err_z_H1 = || (e^{ic^2 t} u_inf + conj)/2 - (u + conj u)/2 ||_{H^1}
///   err_n_L2 = || n_inf - n ||_{L^2}.
inline std::pair<double, double> twisted_compare(const KgzState& kgz_final,
                                                 const ZakharovState& zak_final, double t,
                                                 double c) {
  require_compatible(kgz_final.u.grid(), zak_final.u_inf.grid(), "twisted_compare");
  const double scale = std::max(1.0, std::abs(t));
  if (std::abs(kgz_final.time - zak_final.time) > 1e-9 * scale ||
      std::abs(kgz_final.time - t) > 1e-9 * scale) {
    throw std::invalid_argument("twisted_compare: states are at different times");
  }
  const Complex phase = std::polar(1.0, c * c * t);
  const SpectralField z_limit = to_physical_z(phase * zak_final.u_inf);
  const SpectralField z_ua = to_physical_z(kgz_final.u);
  const double err_z = sobolev_norm(z_limit - z_ua, 1.0);
  const double err_n = sobolev_norm(zak_final.n_inf - kgz_final.n, 0.0);
  return {err_z, err_n};
}

}  // namespace kgz
