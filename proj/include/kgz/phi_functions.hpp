#pragma once

#include <cmath>
#include <complex>
#include <cstddef>

namespace kgz {

/// The entire functions arising from Duhamel quadrature of oscillatory
/// exponentials:
///   phi0(z) = e^z
///   phi1(z) = (e^z - 1)/z
///   phi2(z) = (phi1(z) - 1)/z
///   psi2(z) = (phi0(z) - phi1(z))/z
/// each extended continuously at z = 0. Near the origin the closed forms
/// cancel catastrophically, so below |z| = 1e-2 a degree-10 Taylor
/// polynomial is used (remainder < 1e-24, far beyond double precision).
enum class PhiKind { phi0, phi1, phi2, psi2 };

namespace detail {

constexpr double kPhiTaylorThreshold = 1e-2;
constexpr int kPhiTaylorDegree = 10;

// phi1: sum z^n/(n+1)!, phi2: sum z^n/(n+2)!, psi2: sum z^n (n+1)/(n+2)!.
inline std::complex<double> phi1_taylor(std::complex<double> z) {
  std::complex<double> term(1.0, 0.0), sum(1.0, 0.0);
  double fac = 1.0;
  for (int n = 1; n <= kPhiTaylorDegree; ++n) {
    term *= z;
    fac *= static_cast<double>(n + 1);
    sum += term / fac;
  }
  return sum;
}

inline std::complex<double> phi2_taylor(std::complex<double> z) {
  std::complex<double> term(1.0, 0.0), sum(0.5, 0.0);
  double fac = 2.0;
  for (int n = 1; n <= kPhiTaylorDegree; ++n) {
    term *= z;
    fac *= static_cast<double>(n + 2);
    sum += term / fac;
  }
  return sum;
}

inline std::complex<double> psi2_taylor(std::complex<double> z) {
  std::complex<double> term(1.0, 0.0), sum(0.5, 0.0);
  double fac = 2.0;
  for (int n = 1; n <= kPhiTaylorDegree; ++n) {
    term *= z;
    fac *= static_cast<double>(n + 2);
    sum += term * (static_cast<double>(n + 1) / fac);
  }
  return sum;
}

}  // namespace detail

inline std::complex<double> phi0(std::complex<double> z) { return std::exp(z); }

inline std::complex<double> phi1(std::complex<double> z) {
  if (std::abs(z) < detail::kPhiTaylorThreshold) return detail::phi1_taylor(z);
  return (std::exp(z) - 1.0) / z;
}

inline std::complex<double> phi2(std::complex<double> z) {
  if (std::abs(z) < detail::kPhiTaylorThreshold) return detail::phi2_taylor(z);
  return (phi1(z) - 1.0) / z;
}

inline std::complex<double> psi2(std::complex<double> z) {
  if (std::abs(z) < detail::kPhiTaylorThreshold) return detail::psi2_taylor(z);
  return (std::exp(z) - phi1(z)) / z;
}

inline std::complex<double> phi(PhiKind kind, std::complex<double> z) {
  switch (kind) {
    case PhiKind::phi0: return phi0(z);
    case PhiKind::phi1: return phi1(z);
    case PhiKind::phi2: return phi2(z);
    case PhiKind::psi2: return psi2(z);
  }
  return {};  // unreachable
}

/// Divided difference (phi1(a) - phi1(b)) / (a - b). For nearly equal
/// arguments the quotient cancels, so it falls back to the exact first-order
/// limit phi1'(m) = psi2(m) at the midpoint.
inline std::complex<double> phi1_divided_difference(std::complex<double> a,
                                                    std::complex<double> b) {
  const std::complex<double> d = a - b;
  if (std::abs(d) < 1e-6) return psi2(0.5 * (a + b));
  return (phi1(a) - phi1(b)) / d;
}

}  // namespace kgz
