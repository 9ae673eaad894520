#pragma once

#include <cmath>
#include <complex>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "kgz/experiments.hpp"
#include "kgz/integrator_uaosc1.hpp"
#include "kgz/integrator_uaosc2.hpp"
#include "kgz/kgz_model.hpp"
#include "kgz/phi_functions.hpp"
#include "kgz/spectral_field.hpp"
#include "kgz/symbols.hpp"

namespace kgz {

struct SelftestResult {
  std::string name;
  bool pass;
  std::string detail;  // empty on success
};

namespace selftest_detail {

inline std::vector<Complex> random_samples(std::size_t n, unsigned seed, bool real_valued) {
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  std::vector<Complex> v(n);
  for (auto& x : v) x = Complex(dist(rng), real_valued ? 0.0 : dist(rng));
  return v;
}

struct Check {
  bool ok = true;
  std::ostringstream detail;

  void expect(bool cond, const std::string& what) {
    if (!cond && ok) {
      ok = false;
      detail << what;
    }
  }
};

inline SelftestResult dft_round_trip() {
  Check c;
  for (std::size_t n : {8u, 32u, 128u}) {
    const auto grid = make_grid(n);
    const auto samples = random_samples(n, 1000u + static_cast<unsigned>(n), false);
    const auto back = to_physical(to_spectral(grid, std::span<const Complex>(samples)));
    double max_err = 0.0, max_mag = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      max_err = std::max(max_err, std::abs(back[j] - samples[j]));
      max_mag = std::max(max_mag, std::abs(samples[j]));
    }
    c.expect(max_err <= 1e-12 * max_mag, "round trip error " + std::to_string(max_err) +
                                             " at N=" + std::to_string(n));
  }
  return {"dft_round_trip", c.ok, c.detail.str()};
}

inline SelftestResult parseval() {
  Check c;
  for (std::size_t n : {8u, 32u, 128u}) {
    const auto grid = make_grid(n);
    const auto samples = random_samples(n, 2000u + static_cast<unsigned>(n), false);
    const auto f = to_spectral(grid, std::span<const Complex>(samples));
    double phys = 0.0;
    for (const auto& v : samples) phys += std::norm(v);
    phys /= static_cast<double>(n);
    const double l2 = sobolev_norm(f, 0.0);
    c.expect(std::abs(l2 * l2 - phys) <= 1e-12 * phys, "Parseval mismatch at N=" +
                                                               std::to_string(n));
  }
  return {"parseval", c.ok, c.detail.str()};
}

inline SelftestResult multiplier_linearity() {
  Check c;
  const auto grid = make_grid(32);
  const auto fa = to_spectral(grid, std::span<const Complex>(random_samples(32, 31, false)));
  const auto fb = to_spectral(grid, std::span<const Complex>(random_samples(32, 32, false)));
  const Multiplier m = symbols::bracket_c(*grid, 3.0);
  const Complex alpha(0.7, -0.2), beta(-1.3, 0.4);
  const auto lhs = apply_multiplier(m, alpha * fa + beta * fb);
  const auto rhs = alpha * apply_multiplier(m, fa) + beta * apply_multiplier(m, fb);
  const double err = sobolev_norm(lhs - rhs, 0.0);
  const double scale = sobolev_norm(lhs, 0.0) + 1.0;
  c.expect(err <= 1e-12 * scale, "linearity violation " + std::to_string(err));
  return {"multiplier_linearity", c.ok, c.detail.str()};
}

inline SelftestResult hermitian_preservation() {
  Check c;
  const auto grid = make_grid(64);
  const auto f = to_spectral(grid, std::span<const Complex>(random_samples(64, 7, true)));
  c.expect(f.hermitian(), "real samples not flagged hermitian");
  for (const Multiplier& m : {symbols::bracket_c(*grid, 2.0), symbols::laplace(*grid),
                              symbols::cos_t_bracket0(*grid, 0.3), symbols::filter_psi(*grid, 0.1)}) {
    const auto out = to_physical(apply_multiplier(m, f));
    double max_imag = 0.0, max_mag = 0.0;
    for (const auto& v : out) {
      max_imag = std::max(max_imag, std::abs(v.imag()));
      max_mag = std::max(max_mag, std::abs(v));
    }
    c.expect(max_imag <= 1e-11 * std::max(max_mag, 1.0), "imaginary leakage through real symbol");
  }
  return {"hermitian_preservation", c.ok, c.detail.str()};
}

inline SelftestResult phi_recurrences() {
  Check c;
  std::mt19937 rng(99);
  std::uniform_real_distribution<double> angle(0.0, 2.0 * std::numbers::pi);
  for (double mag = 1e-12; mag <= 1e3; mag *= 10.0) {
    for (int rep = 0; rep < 8; ++rep) {
      Complex z = std::polar(mag, angle(rng));
      if (z.real() > 30.0) z = Complex(30.0, z.imag());  // keep e^z finite
      const Complex r1 = z * phi1(z) - (phi0(z) - 1.0);
      const Complex r2 = z * phi2(z) - (phi1(z) - 1.0);
      const Complex r3 = z * psi2(z) - (phi0(z) - phi1(z));
      const double scale = std::abs(phi0(z)) + 1.0;
      c.expect(std::abs(r1) <= 1e-12 * scale, "phi1 recurrence fails at |z|=" + std::to_string(mag));
      c.expect(std::abs(r2) <= 1e-12 * scale, "phi2 recurrence fails at |z|=" + std::to_string(mag));
      c.expect(std::abs(r3) <= 1e-12 * scale, "psi2 recurrence fails at |z|=" + std::to_string(mag));
    }
  }
  return {"phi_recurrences", c.ok, c.detail.str()};
}

inline SelftestResult phi_branch_continuity() {
  Check c;
  const double t = detail::kPhiTaylorThreshold;
  for (double arg : {0.0, 0.9, 2.2, 4.0}) {
    const Complex lo = std::polar(t * (1.0 - 1e-3), arg);
    const Complex hi = std::polar(t * (1.0 + 1e-3), arg);
    c.expect(std::abs(phi1(lo) - phi1(hi)) <= 2e-3 * t + 1e-12, "phi1 jump across branch");
    c.expect(std::abs(phi2(lo) - phi2(hi)) <= 2e-3 * t + 1e-12, "phi2 jump across branch");
    c.expect(std::abs(psi2(lo) - psi2(hi)) <= 2e-3 * t + 1e-12, "psi2 jump across branch");
  }
  return {"phi_branch_continuity", c.ok, c.detail.str()};
}

inline SelftestResult phi_bounds() {
  Check c;
  for (double x = -1000.0; x <= 1000.0; x += 0.37) {
    c.expect(std::abs(phi1(Complex(0.0, x))) <= 1.0 + 1e-14, "|phi1(ix)| > 1");
    c.expect(std::abs(phi2(Complex(0.0, x))) <= 1.0 + 1e-14, "|phi2(ix)| > 1");
  }
  return {"phi_bounds", c.ok, c.detail.str()};
}

inline SelftestResult symbol_bounds() {
  Check c;
  for (double cc : {1.0, 10.0, 1000.0}) {
    for (int k = -64; k <= 64; ++k) {
      const double kk = k;
      const double br = std::sqrt(kk * kk + cc * cc);
      c.expect(cc / br <= 1.0 + 1e-15, "c/bracket exceeds 1");
      c.expect(std::abs(std::abs(std::polar(1.0, 0.7 * cc * br)) - 1.0) <= 1e-15,
               "free phase not unit modulus");
      const double ac = cc * kk * kk / (cc + br);
      c.expect(ac <= 0.5 * kk * kk + 1e-12, "A_c exceeds k^2/2");
      if (k != 0) {
        c.expect(1.0 / (cc * cc + kk * kk) <= 1.0 / (cc * std::abs(kk)) + 1e-15,
                 "inverse bracket bound (c|k|) fails");
        c.expect(1.0 / (cc * cc + kk * kk) <= 1.0 / (kk * kk) + 1e-15,
                 "inverse bracket bound (k^2) fails");
      }
      c.expect(1.0 / (cc * cc + kk * kk) <= 1.0 / (cc * cc) + 1e-15,
               "inverse bracket bound (c^2) fails");
    }
  }
  return {"symbol_bounds", c.ok, c.detail.str()};
}

inline SelftestResult a_c_precision() {
  Check c;
  // Reference value of A_c at c = 1e4, k = 1 from 50-digit arithmetic.
  const double reference = 0.49999999875000000625;
  const auto grid = make_grid(8);
  const Multiplier m = symbols::a_c(*grid, 1e4);
  const double got = m.values[1].real();
  c.expect(std::abs(got - reference) <= 1e-14 * reference,
           "A_c(1e4, 1) relative error too large");
  return {"a_c_precision", c.ok, c.detail.str()};
}

inline SelftestResult free_wave_exactness() {
  Check c;
  const auto grid = make_grid(128);
  const std::size_t n = grid->num_points();
  std::vector<double> n0(n), zero(n, 0.0);
  for (std::size_t j = 0; j < n; ++j) n0[j] = std::cos(grid->node(j));
  const double tau = 0.01;
  const int steps = 100;
  for (double cc : {1.0, 1024.0}) {
    const ModelParams params(cc, grid);
    const PhysicalState p{to_spectral(grid, std::span<const double>(zero)),
                          to_spectral(grid, std::span<const double>(zero)),
                          to_spectral(grid, std::span<const double>(n0)),
                          to_spectral(grid, std::span<const double>(zero))};
    for (int order = 1; order <= 2; ++order) {
      KgzState s = initial_state(p, params, tau, order);
      s = order == 1 ? propagate1(std::move(s), params, tau, steps)
                     : propagate2(std::move(s), params, tau, steps);
      const auto n_end = to_physical_real(s.n);
      double max_err = 0.0;
      for (std::size_t j = 0; j < n; ++j) {
        max_err = std::max(max_err,
                           std::abs(n_end[j] - std::cos(tau * steps) * std::cos(grid->node(j))));
      }
      c.expect(max_err <= 1e-11, "free wave error " + std::to_string(max_err) + " at c=" +
                                     std::to_string(cc) + " order " + std::to_string(order));
      c.expect(sobolev_norm(s.u, 0.0) == 0.0, "u not exactly zero in free-wave sector");
      c.expect(sobolev_norm(s.G, 0.0) == 0.0, "G not exactly zero in free-wave sector");
    }
  }
  return {"free_wave_exactness", c.ok, c.detail.str()};
}

inline SelftestResult zero_mode_recursion() {
  Check c;
  const auto grid = make_grid(32);
  const std::size_t n = grid->num_points();
  std::vector<double> nv(n), ndv(n);
  for (std::size_t j = 0; j < n; ++j) {
    const double x = grid->node(j);
    nv[j] = 0.4 + 0.3 * std::cos(x);
    ndv[j] = -0.2 + 0.1 * std::sin(2.0 * x);
  }
  const ModelParams params(4.0, grid);
  const PhysicalState p{SpectralField::zero(grid), SpectralField::zero(grid),
                        to_spectral(grid, std::span<const double>(nv)),
                        to_spectral(grid, std::span<const double>(ndv))};
  const double tau = 0.05;
  KgzState s = initial_state(p, params, tau, 1);
  const Complex n_mean = s.n.coeff(0);
  const Complex nd_mean = s.ndot.coeff(0);
  const StepOperators1 ops = StepOperators1::build(grid, params.c, tau);
  const KgzState s1 = step1(s, ops, params, tau);
  c.expect(s1.n.coeff(0) == n_mean + tau * nd_mean, "zero mode of n not exact");
  c.expect(s1.ndot.coeff(0) == nd_mean, "zero mode of ndot not exact");
  return {"zero_mode_recursion", c.ok, c.detail.str()};
}

inline SelftestResult realness_preservation() {
  Check c;
  const auto grid = make_grid(128);
  const double cc = 1024.0, tau = 1e-3;
  const ModelParams params(cc, grid);
  const PhysicalState p = benchmark_initial_data(grid, cc);
  for (int order = 1; order <= 2; ++order) {
    KgzState s = initial_state(p, params, tau, order);
    s = order == 1 ? propagate1(std::move(s), params, tau, 100)
                   : propagate2(std::move(s), params, tau, 100);
    for (const SpectralField* f : {&s.n, &s.ndot}) {
      const auto phys = to_physical(*f);
      double max_imag = 0.0, max_mag = 0.0;
      for (const auto& v : phys) {
        max_imag = std::max(max_imag, std::abs(v.imag()));
        max_mag = std::max(max_mag, std::abs(v));
      }
      c.expect(max_imag <= 1e-10 * std::max(max_mag, 1.0),
               "imaginary contamination in n or ndot, order " + std::to_string(order));
    }
  }
  return {"realness_preservation", c.ok, c.detail.str()};
}

}  // namespace selftest_detail

/// Runs the property suites; used by the CLI's `selftest` subcommand.
inline std::vector<SelftestResult> run_selftests() {
  using namespace selftest_detail;
  return {dft_round_trip(),    parseval(),           multiplier_linearity(),
          hermitian_preservation(), phi_recurrences(), phi_branch_continuity(),
          phi_bounds(),        symbol_bounds(),      a_c_precision(),
          free_wave_exactness(), zero_mode_recursion(), realness_preservation()};
}

}  // namespace kgz
