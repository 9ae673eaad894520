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

/// Precomputed Fourier-diagonal tables for one step of the first-order
/// scheme at fixed (tau, c, grid). Per step the work is then a handful of
/// size-N transforms plus O(N) multiplies.
struct StepOperators1 {
  double tau = 0.0;
  double c = 0.0;
  GridPtr grid;

  Multiplier exp_tc;         // e^{i tau c <grad>_c}
  Multiplier inv_br2;        // <grad>_c^{-2}
  Multiplier phi1_half_lap;  // phi1(i tau Delta / 2)
  Multiplier phi1_m_cbr;     // phi1(-i tau (c<grad>_c + c^2))
  Multiplier cos_w;          // cos(tau <grad>_0)
  Multiplier tsinc_w;        // tau sinc(tau <grad>_0) = <grad>_0^{-1} sin(tau <grad>_0)
  Multiplier wsin_w;         // <grad>_0 sin(tau <grad>_0)
  Multiplier sinc_w;         // sinc(tau <grad>_0)
  Multiplier lap;            // Delta
  Multiplier c_br;           // c <grad>_c

  Complex phi1_p{};  // phi1(+2i c^2 tau)
  Complex phi1_m{};  // phi1(-2i c^2 tau)
  Complex phi2_p{};  // phi2(+2i c^2 tau)
  Complex phi2_m{};  // phi2(-2i c^2 tau)

  static StepOperators1 build(GridPtr grid, double c, double tau) {
    symbols::require_c(c);
    if (!(tau > 0.0) || !std::isfinite(tau)) {
      throw std::invalid_argument("StepOperators1: tau must be positive");
    }
    const TorusGrid& g = *grid;
    StepOperators1 ops;
    ops.tau = tau;
    ops.c = c;
    ops.grid = grid;
    ops.exp_tc = symbols::exp_i_t_c_bracket(g, c, tau);
    ops.inv_br2 = symbols::inv_bracket_c_sq(g, c);
    ops.phi1_half_lap = symbols::phi_of_operator(PhiKind::phi1, Complex(0.0, 0.5 * tau),
                                                 symbols::laplace(g));
    ops.phi1_m_cbr = symbols::phi_of_operator(PhiKind::phi1, Complex(0.0, -tau),
                                              symbols::c_bracket_plus_c2(g, c));
    ops.cos_w = symbols::cos_t_bracket0(g, tau);
    ops.tsinc_w = symbols::sinc_t_bracket0(g, tau);
    ops.tsinc_w.scale(tau);
    ops.wsin_w = symbols::bracket0(g) * symbols::sin_t_bracket0(g, tau);
    ops.sinc_w = symbols::sinc_t_bracket0(g, tau);
    ops.lap = symbols::laplace(g);
    ops.c_br = symbols::bracket_c(g, c);
    ops.c_br.scale(c);
    ops.phi1_p = phi1(Complex(0.0, 2.0 * c * c * tau));
    ops.phi1_m = phi1(Complex(0.0, -2.0 * c * c * tau));
    ops.phi2_p = phi2(Complex(0.0, 2.0 * c * c * tau));
    ops.phi2_m = phi2(Complex(0.0, -2.0 * c * c * tau));
    return ops;
  }

  void check_matches(const ModelParams& params, double tau_arg) const {
    if (tau != tau_arg || c != params.c || !grid || !grid->compatible(*params.grid)) {
      throw std::invalid_argument("StepOperators1: built for a different (tau, c, grid)");
    }
  }
};

namespace detail {

/// u = -i G - (1/2) <grad>_c^{-2} ( n (S + conj S) ); shared by the step and
/// by consistency tests so re-derivation is bit-identical.
inline SpectralField recover_u(const SpectralField& G, const SpectralField& n,
                               const SpectralField& sF, const StepOperators1& ops,
                               bool dealias) {
  const TorusGrid& g = *ops.grid;
  const auto n_phys = to_physical_real(n);
  const auto s_phys = to_physical(sF);
  std::vector<Complex> prod(g.num_points());
  for (std::size_t j = 0; j < prod.size(); ++j) {
    prod[j] = Complex(n_phys[j] * 2.0 * s_phys[j].real(), 0.0);
  }
  auto prod_hat = forward_product(prod, g, dealias);
  std::vector<Complex> u(g.num_points());
  for (std::size_t s = 0; s < u.size(); ++s) {
    u[s] = Complex(0.0, -1.0) * G.coeff(s) - 0.5 * ops.inv_br2.values[s] * prod_hat[s];
  }
  return SpectralField(ops.grid, std::move(u), false);
}

}  // namespace detail

/// One step of the first-order uniformly accurate oscillatory integrator.
///
/// Update order: G (the scaled wave variable), then (n, ndot) by exact free
/// rotation plus phi-weighted quadratic forcing, then u from (G_new, n_new)
/// and the incoming running sum, then S <- S - i (e^{i tau c<grad>_c} - 1) G_new.
/// The incoming sum u0 + tau phi1 (F_0 + ... + F_l) is exactly the Duhamel
/// antiderivative that pairs with u at the new time; the updated sum is
/// consumed by the following step. The nonlinear brackets are formed
/// pointwise in physical space and transformed once per bracketed group;
/// n and ndot are hermitian-projected once per step.
inline KgzState step1(const KgzState& s, const StepOperators1& ops, const ModelParams& params,
                      double tau) {
  ops.check_matches(params, tau);
  require_compatible(s.u.grid(), *params.grid, "step1");
  const TorusGrid& g = *params.grid;
  const std::size_t n = g.num_points();
  const Complex I(0.0, 1.0);

  const auto u_phys = to_physical(s.u);
  const auto w_phys = to_physical(apply_multiplier(ops.c_br, s.u));  // c<grad>_c u
  const auto n_phys = to_physical_real(s.n);
  const auto nd_phys = to_physical_real(s.ndot);

  // P = ndot u + i n (c<grad>_c u); the conjugate bracket
  // ndot conj(u) - i n (c<grad>_c conj(u)) is exactly conj(P) for real n, ndot.
  std::vector<Complex> bracket(n);
  for (std::size_t j = 0; j < n; ++j) {
    bracket[j] = nd_phys[j] * u_phys[j] + I * n_phys[j] * w_phys[j];
  }
  const auto p_hat = detail::forward_product(bracket, g, params.dealias);
  const auto m_hat = detail::conj_spectrum(p_hat, g);

  std::vector<Complex> g_new(n);
  for (std::size_t k = 0; k < n; ++k) {
    const Complex forcing =
        ops.phi1_half_lap.values[k] * p_hat[k] + ops.phi1_m_cbr.values[k] * m_hat[k];
    g_new[k] = ops.exp_tc.values[k] *
               (s.G.coeff(k) + I * (0.5 * tau) * ops.inv_br2.values[k] * forcing);
  }

  // Quadratic forcings |u|^2 + 2 Re(phi2(2ic^2 tau) u^2) and
  // 2|u|^2 + 2 Re(phi1(2ic^2 tau) u^2); real by construction.
  std::vector<Complex> q1(n), q2(n);
  for (std::size_t j = 0; j < n; ++j) {
    const double abs2 = std::norm(u_phys[j]);
    const Complex u2 = u_phys[j] * u_phys[j];
    q1[j] = Complex(abs2 + 2.0 * (ops.phi2_p * u2).real(), 0.0);
    q2[j] = Complex(2.0 * abs2 + 2.0 * (ops.phi1_p * u2).real(), 0.0);
  }
  const auto q1_hat = detail::forward_product(q1, g, params.dealias);
  const auto q2_hat = detail::forward_product(q2, g, params.dealias);

  std::vector<Complex> n_new(n), nd_new(n);
  for (std::size_t k = 0; k < n; ++k) {
    n_new[k] = ops.cos_w.values[k] * s.n.coeff(k) + ops.tsinc_w.values[k] * s.ndot.coeff(k) +
               (tau * tau / 4.0) * ops.sinc_w.values[k] * ops.lap.values[k] * q1_hat[k];
    nd_new[k] = -ops.wsin_w.values[k] * s.n.coeff(k) + ops.cos_w.values[k] * s.ndot.coeff(k) +
                (tau / 4.0) * ops.cos_w.values[k] * ops.lap.values[k] * q2_hat[k];
  }
  detail::project_hermitian_inplace(n_new, g);
  detail::project_hermitian_inplace(nd_new, g);

  std::vector<Complex> s_new(n);
  for (std::size_t k = 0; k < n; ++k) {
    s_new[k] = s.sF.coeff(k) - I * (ops.exp_tc.values[k] - 1.0) * g_new[k];
  }

  SpectralField G1(params.grid, std::move(g_new), false);
  SpectralField n1(params.grid, std::move(n_new), true);
  SpectralField nd1(params.grid, std::move(nd_new), true);
  SpectralField sF1(params.grid, std::move(s_new), false);
  SpectralField u1 = detail::recover_u(G1, n1, s.sF, ops, params.dealias);

  return KgzState{std::move(u1), std::move(G1), std::move(n1), std::move(nd1), std::move(sF1),
                  s.time + tau};
}

/// num_steps applications of step1 with one precomputed operator table.
inline KgzState propagate1(KgzState s, const ModelParams& params, double tau,
                           std::int64_t num_steps) {
  if (num_steps < 0) throw std::invalid_argument("propagate1: num_steps must be >= 0");
  if (num_steps == 0) return s;
  const StepOperators1 ops = StepOperators1::build(params.grid, params.c, tau);
  for (std::int64_t i = 0; i < num_steps; ++i) {
    s = step1(s, ops, params, tau);
    if (!all_finite(s.u) || !all_finite(s.n)) {
      throw DivergenceError(params.c, tau, s.time);
    }
  }
  return s;
}

}  // namespace kgz
