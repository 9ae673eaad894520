#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <stdexcept>
#include <utility>
#include <vector>

#include "kgz/errors.hpp"
#include "kgz/integrator_uaosc1.hpp"
#include "kgz/kgz_model.hpp"
#include "kgz/spectral_field.hpp"
#include "kgz/symbols.hpp"

namespace kgz {

/// Diagonal tables for one step of the second-order scheme at fixed
/// (tau, c, grid). Extends the first-order tables with the reduced dispersion
/// operator A_c = c<grad>_c - c^2, its phi/Psi multipliers, the sinc filter
/// psi and the mode-wise quotient symbols, all with stable small-denominator
/// branches.
///
/// `literal_scheme_block_signs` flips the sign of the Psi2(-i tau A_c) term
/// inside the bracketed n c<grad>_c^{-1}[...] group; the default follows the
/// derivation form, which is the variant validated by the order-2 tests.
struct StepOperators2 {
  StepOperators1 base;
  bool literal_scheme_block_signs = false;

  Multiplier m_ac;            // A_c
  Multiplier phi1_p_ac;       // phi1(+i tau A_c)
  Multiplier phi1_m_ac;       // phi1(-i tau A_c)
  Multiplier psi2_m_cbr;      // Psi2(-i tau (c<grad>_c + c^2))
  Multiplier phi1_p_cbr;      // phi1(+i tau (c^2 + c<grad>_c))
  Multiplier psi;             // filter sinc(tau Delta / 2)
  Multiplier psi_psi2_m_ac;   // psi * Psi2(-i tau A_c)
  Multiplier inner_u;         // (+/-) Psi2(-i tau A_c) + phi1-quotient, on (n c<grad>_c u)
  Multiplier inner_ubar;      // -Psi2(-i tau(cbr+c^2)) + phi2(-i tau(cbr+c^2)), on (n c<grad>_c ubar)
  Multiplier c_inv_br;        // c <grad>_c^{-1}
  Multiplier q_sum;           // running-sum conjugate-phase quotient (includes c<grad>_c^{-1})
  Multiplier q_pair;          // oscillatory-pair quotient of the ndot update
  Multiplier q_j2;            // phi2(-i tau(cbr+c^2)) c<grad>_c^{-1}
  Multiplier s_half_lap;      // c<grad>_c^{-1} phi1(i tau Delta / 2)

  Complex psi2_p2{};   // Psi2(+2i c^2 tau)
  Complex psi2_ic2{};  // Psi2(+i tau c^2)

  static constexpr bool default_literal_signs() {
#ifdef KGZ_UAOSC2_LITERAL_SIGNS
    return true;
#else
    return false;
#endif
  }

  static StepOperators2 build(GridPtr grid, double c, double tau,
                              bool literal_signs = default_literal_signs()) {
    const TorusGrid& g = *grid;
    StepOperators2 ops;
    ops.base = StepOperators1::build(grid, c, tau);
    ops.literal_scheme_block_signs = literal_signs;

    ops.m_ac = symbols::a_c(g, c);
    ops.phi1_p_ac = symbols::phi_of_operator(PhiKind::phi1, Complex(0.0, tau), ops.m_ac);
    ops.phi1_m_ac = symbols::phi_of_operator(PhiKind::phi1, Complex(0.0, -tau), ops.m_ac);
    const Multiplier cbr2 = symbols::c_bracket_plus_c2(g, c);
    ops.psi2_m_cbr = symbols::phi_of_operator(PhiKind::psi2, Complex(0.0, -tau), cbr2);
    ops.phi1_p_cbr = symbols::phi_of_operator(PhiKind::phi1, Complex(0.0, tau), cbr2);
    ops.psi = symbols::filter_psi(g, tau);
    ops.psi_psi2_m_ac =
        ops.psi * symbols::phi_of_operator(PhiKind::psi2, Complex(0.0, -tau), ops.m_ac);

    Multiplier psi2_ac = symbols::phi_of_operator(PhiKind::psi2, Complex(0.0, -tau), ops.m_ac);
    psi2_ac.scale(Complex(literal_signs ? 1.0 : -1.0, 0.0));
    ops.inner_u = psi2_ac + symbols::quotient_phi1_ac(g, c, tau);

    Multiplier neg_psi2_cbr = ops.psi2_m_cbr;
    neg_psi2_cbr.scale(Complex(-1.0, 0.0));
    ops.inner_ubar =
        neg_psi2_cbr + symbols::phi_of_operator(PhiKind::phi2, Complex(0.0, -tau), cbr2);

    ops.c_inv_br = symbols::c_inv_bracket(g, c);
    ops.q_sum = symbols::quotient_sum_correction(g, c, tau);
    ops.q_pair = symbols::quotient_phase_pair(g, c, tau);
    ops.q_j2 = symbols::phi_of_operator(PhiKind::phi2, Complex(0.0, -tau), cbr2) * ops.c_inv_br;
    ops.s_half_lap = ops.c_inv_br * ops.base.phi1_half_lap;

    ops.psi2_p2 = psi2(Complex(0.0, 2.0 * c * c * tau));
    ops.psi2_ic2 = psi2(Complex(0.0, tau * c * c));
    return ops;
  }
};

/// One step of the second-order uniformly accurate oscillatory integrator.
///
/// `u0` is the twisted initial datum of the propagation: the u-update reads
/// u(0) + S at every step, with S the second-order running sum started at
/// zero. The (n, ndot) free rotation matches step1; the quadratic and cubic
/// corrections integrate every oscillatory phase e^{i k c^2 t} exactly.
inline KgzState step2(const KgzState& s, const SpectralField& u0, const StepOperators2& ops,
                      const ModelParams& params, double tau) {
  ops.base.check_matches(params, tau);
  require_compatible(s.u.grid(), *params.grid, "step2");
  require_compatible(u0.grid(), *params.grid, "step2");
  const TorusGrid& g = *params.grid;
  const std::size_t n = g.num_points();
  const Complex I(0.0, 1.0);
  const bool dealias = params.dealias;

  // Current-state spectra and samples.
  std::vector<Complex> f_hat(n);
  for (std::size_t k = 0; k < n; ++k) f_hat[k] = ops.base.c_br.values[k] * s.G.coeff(k);
  const SpectralField F(params.grid, f_hat, false);

  const auto u_phys = to_physical(s.u);
  const auto w_phys = to_physical(apply_multiplier(ops.base.c_br, s.u));
  const auto f_phys = to_physical(F);
  const auto acu_phys = to_physical(apply_multiplier(ops.m_ac, s.u));
  const auto acf_phys = to_physical(apply_multiplier(ops.m_ac, F));
  const auto n_phys = to_physical_real(s.n);
  const auto nd_phys = to_physical_real(s.ndot);

  // I = u Delta(n + (u+ubar)^2/4) + ndot (i A_c u + F) + i n A_c F.
  std::vector<Complex> rho(n);
  for (std::size_t j = 0; j < n; ++j) {
    const double re2 = 2.0 * u_phys[j].real();
    rho[j] = Complex(re2 * re2, 0.0);
  }
  const auto rho_hat = detail::forward_product(rho, g, dealias);
  std::vector<Complex> d_hat(n);
  for (std::size_t k = 0; k < n; ++k) {
    d_hat[k] = ops.base.lap.values[k] * (s.n.coeff(k) + 0.25 * rho_hat[k]);
  }
  std::vector<Complex> d_phys(n);
  dft_for(n).backward(d_hat, d_phys);
  std::vector<Complex> i_bracket(n);
  for (std::size_t j = 0; j < n; ++j) {
    i_bracket[j] = u_phys[j] * d_phys[j] + nd_phys[j] * (I * acu_phys[j] + f_phys[j]) +
                   I * n_phys[j] * acf_phys[j];
  }
  const auto i_hat = detail::forward_product(i_bracket, g, dealias);
  const auto i_conj_hat = detail::conj_spectrum(i_hat, g);

  // phi1-coupled brackets with the filtered density: ndot u + (psi n) F and
  // its conjugate.
  const auto psin_phys = to_physical_real(apply_multiplier(ops.psi, s.n));
  std::vector<Complex> p2(n);
  for (std::size_t j = 0; j < n; ++j) {
    p2[j] = nd_phys[j] * u_phys[j] + psin_phys[j] * f_phys[j];
  }
  const auto p2_hat = detail::forward_product(p2, g, dealias);
  const auto m2_hat = detail::conj_spectrum(p2_hat, g);

  // Bracketed group n c<grad>_c^{-1}[ ... n c<grad>_c u + ... n c<grad>_c ubar ].
  std::vector<Complex> nw(n);
  for (std::size_t j = 0; j < n; ++j) nw[j] = n_phys[j] * w_phys[j];
  const auto nw_hat = detail::forward_product(nw, g, dealias);
  const auto nwc_hat = detail::conj_spectrum(nw_hat, g);
  std::vector<Complex> inner_hat(n);
  for (std::size_t k = 0; k < n; ++k) {
    inner_hat[k] = ops.c_inv_br.values[k] * (ops.inner_u.values[k] * nw_hat[k] +
                                             ops.inner_ubar.values[k] * nwc_hat[k]);
  }
  std::vector<Complex> inner_phys(n);
  dft_for(n).backward(inner_hat, inner_phys);
  std::vector<Complex> g2(n);
  for (std::size_t j = 0; j < n; ++j) g2[j] = n_phys[j] * inner_phys[j];
  auto g2_hat = detail::forward_product(g2, g, dealias);

  std::vector<Complex> g_new(n);
  for (std::size_t k = 0; k < n; ++k) {
    const Complex forcing =
        ops.phi1_m_ac.values[k] * p2_hat[k] + ops.base.phi1_m_cbr.values[k] * m2_hat[k] +
        tau * (ops.psi_psi2_m_ac.values[k] * i_hat[k] + ops.psi2_m_cbr.values[k] * i_conj_hat[k]) +
        (0.5 * tau) * ops.psi.values[k] * g2_hat[k];
    g_new[k] = ops.base.exp_tc.values[k] *
               (s.G.coeff(k) + I * (0.5 * tau) * ops.base.inv_br2.values[k] * forcing);
  }

  // Density update, identical to the first-order scheme.
  std::vector<Complex> q1(n);
  for (std::size_t j = 0; j < n; ++j) {
    const Complex u2 = u_phys[j] * u_phys[j];
    q1[j] = Complex(std::norm(u_phys[j]) + 2.0 * (ops.base.phi2_p * u2).real(), 0.0);
  }
  const auto q1_hat = detail::forward_product(q1, g, dealias);
  std::vector<Complex> n_new(n);
  for (std::size_t k = 0; k < n; ++k) {
    n_new[k] = ops.base.cos_w.values[k] * s.n.coeff(k) +
               ops.base.tsinc_w.values[k] * s.ndot.coeff(k) +
               (tau * tau / 4.0) * ops.base.sinc_w.values[k] * ops.base.lap.values[k] * q1_hat[k];
  }

  // ndot update: exact rotation plus the second-order quadratic bracket with
  // every oscillatory pair accompanied by its conjugate.
  const auto e1_phys = to_physical(apply_multiplier(ops.phi1_p_ac, s.u));
  const auto e2_phys = to_physical(apply_multiplier(ops.phi1_p_cbr, s.u));

  std::vector<Complex> nu(n);
  for (std::size_t j = 0; j < n; ++j) nu[j] = n_phys[j] * u_phys[j];
  const auto nu_hat = detail::forward_product(nu, g, dealias);
  const auto nubar_hat = detail::conj_spectrum(nu_hat, g);

  std::vector<Complex> cb_nu_hat(n);
  for (std::size_t k = 0; k < n; ++k) cb_nu_hat[k] = ops.c_inv_br.values[k] * nu_hat[k];
  std::vector<Complex> cb_nu_phys(n);
  dft_for(n).backward(cb_nu_hat, cb_nu_phys);

  std::vector<Complex> t1(n), t2(n);
  for (std::size_t j = 0; j < n; ++j) {
    t1[j] = u_phys[j] * cb_nu_phys[j];
    t2[j] = std::conj(u_phys[j]) * cb_nu_phys[j];
  }
  const auto t1_hat = detail::forward_product(t1, g, dealias);
  const auto t2_hat = detail::forward_product(t2, g, dealias);

  std::vector<Complex> qp_nubar_hat(n);
  for (std::size_t k = 0; k < n; ++k) qp_nubar_hat[k] = ops.q_pair.values[k] * nubar_hat[k];
  std::vector<Complex> qp_nubar_phys(n);
  dft_for(n).backward(qp_nubar_hat, qp_nubar_phys);

  std::vector<Complex> t3_src(n);
  for (std::size_t k = 0; k < n; ++k) t3_src[k] = ops.q_j2.values[k] * nubar_hat[k];
  std::vector<Complex> t3_base(n);
  dft_for(n).backward(t3_src, t3_base);
  std::vector<Complex> t3(n);
  for (std::size_t j = 0; j < n; ++j) t3[j] = std::conj(u_phys[j]) * t3_base[j];
  const auto t3_hat = detail::forward_product(t3, g, dealias);

  std::vector<Complex> j1_hat(n), j2_hat(n);
  for (std::size_t k = 0; k < n; ++k) {
    j1_hat[k] = I * tau * ops.psi2_p2 * ops.base.sinc_w.values[k] * t1_hat[k];
    j2_hat[k] = I * ops.base.sinc_w.values[k] * (0.5 * tau * t2_hat[k] + tau * t3_hat[k]);
  }
  std::vector<Complex> j1_phys(n), j2_phys(n);
  dft_for(n).backward(j1_hat, j1_phys);
  dft_for(n).backward(j2_hat, j2_phys);

  std::vector<Complex> r(n);
  for (std::size_t j = 0; j < n; ++j) {
    const Complex u2 = u_phys[j] * u_phys[j];
    const Complex j1 = j1_phys[j] + I * u_phys[j] * qp_nubar_phys[j];
    double val = 4.0 * (std::conj(u_phys[j]) * e1_phys[j]).real() - 2.0 * std::norm(u_phys[j]) -
                 2.0 * (ops.base.phi1_p * u2).real() +
                 4.0 * (u_phys[j] * e2_phys[j]).real() + 2.0 * j1.real() + 2.0 * j2_phys[j].real();
    r[j] = Complex(val, 0.0);
  }
  const auto r_hat = detail::forward_product(r, g, dealias);
  std::vector<Complex> nd_new(n);
  for (std::size_t k = 0; k < n; ++k) {
    nd_new[k] = -ops.base.wsin_w.values[k] * s.n.coeff(k) +
                ops.base.cos_w.values[k] * s.ndot.coeff(k) +
                (tau / 4.0) * ops.base.lap.values[k] * r_hat[k];
  }
  detail::project_hermitian_inplace(n_new, g);
  detail::project_hermitian_inplace(nd_new, g);

  // Running sum: S <- S + tau phi1(i tau c<grad>_c) F + phase-corrected
  // quadratic terms, all evaluated at the old state.
  std::vector<Complex> p1(n);
  for (std::size_t j = 0; j < n; ++j) p1[j] = nd_phys[j] * u_phys[j] + I * nw[j];
  const auto p1_hat = detail::forward_product(p1, g, dealias);
  const auto m1_hat = detail::conj_spectrum(p1_hat, g);
  // q_sum already carries one factor of tau, so its prefactor is i tau/2.
  std::vector<Complex> s_new(n);
  for (std::size_t k = 0; k < n; ++k) {
    s_new[k] = s.sF.coeff(k) - I * (ops.base.exp_tc.values[k] - 1.0) * s.G.coeff(k) +
               I * (0.5 * tau * tau) * ops.psi2_ic2 * ops.s_half_lap.values[k] * p1_hat[k] +
               I * (0.5 * tau) * ops.q_sum.values[k] * m1_hat[k];
  }

  // u update from u(0) + S.
  SpectralField n1(params.grid, std::move(n_new), true);
  SpectralField nd1(params.grid, std::move(nd_new), true);
  SpectralField sF1(params.grid, std::move(s_new), false);
  const auto n1_phys = to_physical_real(n1);
  std::vector<Complex> tot(n);
  for (std::size_t k = 0; k < n; ++k) tot[k] = u0.coeff(k) + sF1.coeff(k);
  std::vector<Complex> tot_phys(n);
  dft_for(n).backward(tot, tot_phys);
  std::vector<Complex> prod(n);
  for (std::size_t j = 0; j < n; ++j) {
    prod[j] = Complex(n1_phys[j] * 2.0 * tot_phys[j].real(), 0.0);
  }
  const auto prod_hat = detail::forward_product(prod, g, dealias);
  std::vector<Complex> u_new(n);
  for (std::size_t k = 0; k < n; ++k) {
    u_new[k] = -I * g_new[k] - 0.5 * ops.base.inv_br2.values[k] * prod_hat[k];
  }

  return KgzState{SpectralField(params.grid, std::move(u_new), false),
                  SpectralField(params.grid, std::move(g_new), false), std::move(n1),
                  std::move(nd1), std::move(sF1), s.time + tau};
}

/// num_steps applications of step2. The start state's u is taken as the
/// running-sum origin u(0); for a fresh propagation pass the state produced
/// by initial_state(..., scheme_order = 2), whose sum starts at zero.
inline KgzState propagate2(KgzState s, const ModelParams& params, double tau,
                           std::int64_t num_steps) {
  if (num_steps < 0) throw std::invalid_argument("propagate2: num_steps must be >= 0");
  if (num_steps == 0) return s;
  const StepOperators2 ops = StepOperators2::build(params.grid, params.c, tau);
  const SpectralField u0 = s.u;
  for (std::int64_t i = 0; i < num_steps; ++i) {
    s = step2(s, u0, ops, params, tau);
    if (!all_finite(s.u) || !all_finite(s.n)) {
      throw DivergenceError(params.c, tau, s.time);
    }
  }
  return s;
}

}  // namespace kgz
