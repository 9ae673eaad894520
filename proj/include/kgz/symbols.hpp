#pragma once

#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>

#include "kgz/multiplier.hpp"
#include "kgz/phi_functions.hpp"
#include "kgz/torus_grid.hpp"

namespace kgz::symbols {

/// The convergence theory assumes plasma frequencies c >= 1.
inline void require_c(double c) {
  if (!(c >= 1.0) || !std::isfinite(c)) {
    throw std::invalid_argument("symbols: plasma frequency must satisfy c >= 1, got " +
                                std::to_string(c));
  }
}

inline double sinc(double x) {
  if (std::abs(x) < 1e-4) {
    const double x2 = x * x;
    return 1.0 - x2 / 6.0 + x2 * x2 / 120.0;
  }
  return std::sin(x) / x;
}

/// sqrt(k^2 + c^2), the Japanese bracket <grad>_c.
inline Multiplier bracket_c(const TorusGrid& grid, double c) {
  require_c(c);
  return make_multiplier(grid, [c](double k) { return std::sqrt(k * k + c * c); });
}

/// |k|, the bracket at c = 0.
inline Multiplier bracket0(const TorusGrid& grid) {
  return make_multiplier(grid, [](double k) { return std::abs(k); });
}

/// -k^2, the Laplacian.
inline Multiplier laplace(const TorusGrid& grid) {
  return make_multiplier(grid, [](double k) { return -k * k; });
}

/// A_c = c sqrt(k^2+c^2) - c^2, evaluated in the cancellation-free form
/// c k^2 / (c + sqrt(c^2+k^2)); the defining difference loses ~2 log10(c/|k|)
/// digits for c >> |k|.
inline Multiplier a_c(const TorusGrid& grid, double c) {
  require_c(c);
  return make_multiplier(
      grid, [c](double k) { return c * k * k / (c + std::sqrt(c * c + k * k)); });
}

/// exp(i t c sqrt(k^2+c^2)), the free Klein-Gordon propagator.
inline Multiplier exp_i_t_c_bracket(const TorusGrid& grid, double c, double t) {
  require_c(c);
  Multiplier m;
  m.values.resize(grid.num_points());
  for (std::size_t s = 0; s < grid.num_points(); ++s) {
    const double k = grid.wavenumber(s);
    m.values[s] = std::polar(1.0, t * c * std::sqrt(k * k + c * c));
  }
  return m;
}

inline Multiplier cos_t_bracket0(const TorusGrid& grid, double t) {
  return make_multiplier(grid, [t](double k) { return std::cos(t * std::abs(k)); });
}

inline Multiplier sin_t_bracket0(const TorusGrid& grid, double t) {
  return make_multiplier(grid, [t](double k) { return std::sin(t * std::abs(k)); });
}

/// sinc(t|k|); t*sinc(t|k|) realizes <grad>_0^{-1} sin(t <grad>_0) without a
/// k = 0 singularity.
inline Multiplier sinc_t_bracket0(const TorusGrid& grid, double t) {
  return make_multiplier(grid, [t](double k) { return sinc(t * std::abs(k)); });
}

/// 1/(k^2 + c^2), the inverse square bracket.
inline Multiplier inv_bracket_c_sq(const TorusGrid& grid, double c) {
  require_c(c);
  return make_multiplier(grid, [c](double k) { return 1.0 / (k * k + c * c); });
}

/// c/sqrt(k^2 + c^2), the coupling operator c <grad>_c^{-1}.
inline Multiplier c_inv_bracket(const TorusGrid& grid, double c) {
  require_c(c);
  return make_multiplier(grid, [c](double k) { return c / std::sqrt(k * k + c * c); });
}

/// Filter psi = sinc(tau/2 * Delta): symbol sinc(tau k^2 / 2).
inline Multiplier filter_psi(const TorusGrid& grid, double tau) {
  return make_multiplier(grid, [tau](double k) { return sinc(0.5 * tau * k * k); });
}

/// phi(kind, scale * base(k)) for a Fourier-diagonal base operator.
inline Multiplier phi_of_operator(PhiKind kind, std::complex<double> scale,
                                  const Multiplier& base) {
  Multiplier m;
  m.values.resize(base.size());
  for (std::size_t s = 0; s < base.size(); ++s) m.values[s] = phi(kind, scale * base.values[s]);
  return m;
}

/// c sqrt(k^2+c^2) + c^2, the denominator lattice of the quotient symbols.
inline Multiplier c_bracket_plus_c2(const TorusGrid& grid, double c) {
  require_c(c);
  return make_multiplier(
      grid, [c](double k) { return c * std::sqrt(k * k + c * c) + c * c; });
}

/// ( phi1(i tau A_c) - phi1(-2i c^2 tau) ) / ( i tau (c<grad>_c + c^2) ),
/// evaluated mode-wise. Because the denominator equals i tau (A_c + 2c^2),
/// this is exactly the phi1 divided difference of the two arguments.
inline Multiplier quotient_phi1_ac(const TorusGrid& grid, double c, double tau) {
  require_c(c);
  Multiplier m;
  m.values.resize(grid.num_points());
  const std::complex<double> b(0.0, -2.0 * c * c * tau);
  const Multiplier ac = a_c(grid, c);
  for (std::size_t s = 0; s < m.values.size(); ++s) {
    const std::complex<double> a(0.0, tau * ac.values[s].real());
    m.values[s] = phi1_divided_difference(a, b);
  }
  return m;
}

/// c<grad>_c^{-1} ( phi1(-i tau c<grad>_c) - phi1(i tau c^2) ) / ( -i (c<grad>_c + c^2) ),
/// the combined coefficient of the conjugate-phase correction in the running
/// sum update. Equals tau (c/<grad>_c) times a phi1 divided difference.
inline Multiplier quotient_sum_correction(const TorusGrid& grid, double c, double tau) {
  require_c(c);
  Multiplier m;
  m.values.resize(grid.num_points());
  const std::complex<double> b(0.0, tau * c * c);
  for (std::size_t s = 0; s < m.values.size(); ++s) {
    const double br = std::sqrt(grid.wavenumber(s) * grid.wavenumber(s) + c * c);
    const std::complex<double> a(0.0, -tau * c * br);
    m.values[s] = tau * (c / br) * phi1_divided_difference(a, b);
  }
  return m;
}

/// ( phi1(-i tau A_c) - phi1(2i c^2 tau) ) / ( -i (<grad>_c + c) <grad>_c ),
/// evaluated mode-wise; equals tau c / <grad>_c times a phi1 divided
/// difference since -i tau (A_c + 2c^2) = -i tau c (<grad>_c + c).
inline Multiplier quotient_phase_pair(const TorusGrid& grid, double c, double tau) {
  require_c(c);
  Multiplier m;
  m.values.resize(grid.num_points());
  const std::complex<double> b(0.0, 2.0 * c * c * tau);
  const Multiplier ac = a_c(grid, c);
  for (std::size_t s = 0; s < m.values.size(); ++s) {
    const double k = grid.wavenumber(s);
    const double br = std::sqrt(k * k + c * c);
    const std::complex<double> a(0.0, -tau * ac.values[s].real());
    m.values[s] = (tau * c / br) * phi1_divided_difference(a, b);
  }
  return m;
}

}  // namespace kgz::symbols
