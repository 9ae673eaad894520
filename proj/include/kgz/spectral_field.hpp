#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

#include "kgz/dft.hpp"
#include "kgz/multiplier.hpp"
#include "kgz/torus_grid.hpp"

namespace kgz {

/// Complex Fourier coefficient vector on a fixed torus grid; the universal
/// field representation of this library. Immutable after construction: all
/// operations return new fields, so instances can be shared across threads.
///
/// The `hermitian` flag asserts real-valuedness in physical space, i.e.
/// coeff(-m) = conj(coeff(m)).
class SpectralField {
 public:
  SpectralField(GridPtr grid, std::vector<Complex> coeffs, bool hermitian)
      : grid_(std::move(grid)), coeffs_(std::move(coeffs)), hermitian_(hermitian) {
    if (!grid_) throw std::invalid_argument("SpectralField: null grid");
    if (coeffs_.size() != grid_->num_points()) {
      throw std::invalid_argument("SpectralField: coefficient count does not match grid");
    }
  }

  static SpectralField zero(GridPtr grid) {
    std::vector<Complex> c(grid->num_points(), Complex(0.0, 0.0));
    return SpectralField(std::move(grid), std::move(c), true);
  }

  const TorusGrid& grid() const { return *grid_; }
  const GridPtr& grid_ptr() const { return grid_; }
  std::span<const Complex> coeffs() const { return coeffs_; }
  Complex coeff(std::size_t s) const { return coeffs_[s]; }
  bool hermitian() const { return hermitian_; }
  std::size_t size() const { return coeffs_.size(); }

  friend SpectralField operator+(const SpectralField& a, const SpectralField& b) {
    require_compatible(a.grid(), b.grid(), "SpectralField::operator+");
    std::vector<Complex> c(a.size());
    for (std::size_t s = 0; s < c.size(); ++s) c[s] = a.coeffs_[s] + b.coeffs_[s];
    return SpectralField(a.grid_, std::move(c), a.hermitian_ && b.hermitian_);
  }

  friend SpectralField operator-(const SpectralField& a, const SpectralField& b) {
    require_compatible(a.grid(), b.grid(), "SpectralField::operator-");
    std::vector<Complex> c(a.size());
    for (std::size_t s = 0; s < c.size(); ++s) c[s] = a.coeffs_[s] - b.coeffs_[s];
    return SpectralField(a.grid_, std::move(c), a.hermitian_ && b.hermitian_);
  }

  friend SpectralField operator*(Complex factor, const SpectralField& f) {
    std::vector<Complex> c(f.size());
    for (std::size_t s = 0; s < c.size(); ++s) c[s] = factor * f.coeffs_[s];
    const bool real_factor = f.hermitian_ && factor.imag() == 0.0;
    return SpectralField(f.grid_, std::move(c), real_factor);
  }

  friend SpectralField operator*(double factor, const SpectralField& f) {
    return Complex(factor, 0.0) * f;
  }

 private:
  GridPtr grid_;
  std::vector<Complex> coeffs_;
  bool hermitian_;
};

/// Forward transform of complex physical samples. The hermitian flag is set
/// when the samples are real to working precision (max imaginary part below
/// 1e-13 of the max magnitude); an all-zero input counts as real.
inline SpectralField to_spectral(GridPtr grid, std::span<const Complex> samples) {
  if (samples.size() != grid->num_points()) {
    throw std::invalid_argument("to_spectral: sample count does not match grid");
  }
  std::vector<Complex> coeffs(samples.size());
  dft_for(samples.size()).forward(samples, coeffs);
  double max_mag = 0.0, max_imag = 0.0;
  for (const auto& v : samples) {
    max_mag = std::max(max_mag, std::abs(v));
    max_imag = std::max(max_imag, std::abs(v.imag()));
  }
  const bool hermitian = (max_mag == 0.0) || (max_imag < 1e-13 * max_mag);
  return SpectralField(std::move(grid), std::move(coeffs), hermitian);
}

inline SpectralField to_spectral(GridPtr grid, std::span<const double> samples) {
  std::vector<Complex> c(samples.size());
  for (std::size_t j = 0; j < samples.size(); ++j) c[j] = Complex(samples[j], 0.0);
  return to_spectral(std::move(grid), std::span<const Complex>(c));
}

inline std::vector<Complex> to_physical(const SpectralField& f) {
  std::vector<Complex> samples(f.size());
  dft_for(f.size()).backward(f.coeffs(), samples);
  return samples;
}

/// Physical samples with the imaginary round-off stripped. Only meaningful
/// for hermitian fields.
inline std::vector<double> to_physical_real(const SpectralField& f) {
  const auto samples = to_physical(f);
  std::vector<double> out(samples.size());
  for (std::size_t j = 0; j < out.size(); ++j) out[j] = samples[j].real();
  return out;
}

inline SpectralField apply_multiplier(const Multiplier& m, const SpectralField& f) {
  if (m.size() != f.size()) {
    throw std::invalid_argument("apply_multiplier: multiplier size does not match grid");
  }
  std::vector<Complex> c(f.size());
  for (std::size_t s = 0; s < c.size(); ++s) c[s] = m.values[s] * f.coeff(s);
  const bool hermitian = f.hermitian() && m.preserves_real_fields(f.grid());
  return SpectralField(f.grid_ptr(), std::move(c), hermitian);
}

/// Complex conjugate in physical space, computed exactly in spectral space
/// via conj(f)^(m) = conj(f^(-m)).
inline SpectralField conj(const SpectralField& f) {
  const auto& g = f.grid();
  const std::size_t n = g.num_points();
  std::vector<Complex> c(n);
  for (std::size_t s = 0; s < n; ++s) {
    const long m = g.mode_index(s);
    const std::size_t src = (m == -static_cast<long>(n) / 2) ? s : g.storage_index(-m);
    c[s] = std::conj(f.coeff(src));
  }
  return SpectralField(f.grid_ptr(), std::move(c), f.hermitian());
}

/// Nearest hermitian field: coeff(m) <- (coeff(m) + conj(coeff(-m)))/2 with
/// the Nyquist coefficient forced real.
inline SpectralField hermitian_projection(const SpectralField& f) {
  const auto& g = f.grid();
  const std::size_t n = g.num_points();
  std::vector<Complex> c(n);
  for (std::size_t s = 0; s < n; ++s) {
    const long m = g.mode_index(s);
    if (m == -static_cast<long>(n) / 2) {
      c[s] = Complex(f.coeff(s).real(), 0.0);
    } else {
      c[s] = 0.5 * (f.coeff(s) + std::conj(f.coeff(g.storage_index(-m))));
    }
  }
  return SpectralField(f.grid_ptr(), std::move(c), true);
}

/// Zeroes all modes with |m| > floor(N/3) (the 2/3 rule).
inline void dealias_inplace(std::vector<Complex>& coeffs, const TorusGrid& grid) {
  const long cutoff = static_cast<long>(grid.num_points()) / 3;
  for (std::size_t s = 0; s < coeffs.size(); ++s) {
    if (std::labs(grid.mode_index(s)) > cutoff) coeffs[s] = Complex(0.0, 0.0);
  }
}

/// Collocation product: transform to physical space, multiply samples,
/// transform back. Without dealiasing the product spectrum carries the usual
/// aliasing images of modes beyond N/2; with `dealias` both factors and the
/// product are truncated to |m| <= N/3 (the complete 2/3 rule).
inline SpectralField pointwise_product(const SpectralField& f, const SpectralField& g,
                                       bool dealias = false) {
  require_compatible(f.grid(), g.grid(), "pointwise_product");
  std::vector<Complex> fa(f.coeffs().begin(), f.coeffs().end());
  std::vector<Complex> ga(g.coeffs().begin(), g.coeffs().end());
  if (dealias) {
    dealias_inplace(fa, f.grid());
    dealias_inplace(ga, f.grid());
  }
  auto& dft = dft_for(fa.size());
  std::vector<Complex> a(fa.size()), b(fa.size());
  dft.backward(fa, a);
  dft.backward(ga, b);
  std::vector<Complex> prod(a.size());
  for (std::size_t j = 0; j < prod.size(); ++j) prod[j] = a[j] * b[j];
  std::vector<Complex> coeffs(prod.size());
  dft.forward(prod, coeffs);
  if (dealias) dealias_inplace(coeffs, f.grid());
  return SpectralField(f.grid_ptr(), std::move(coeffs), f.hermitian() && g.hermitian());
}

/// Discrete Sobolev norm sqrt( sum_m (1 + k_m^2)^r |f_m|^2 ). r = 0 is the
/// L^2 norm under the 1/N-forward DFT convention (Parseval).
inline double sobolev_norm(const SpectralField& f, double r) {
  const auto& g = f.grid();
  double acc = 0.0;
  for (std::size_t s = 0; s < f.size(); ++s) {
    const double k = g.wavenumber(s);
    acc += std::pow(1.0 + k * k, r) * std::norm(f.coeff(s));
  }
  return std::sqrt(acc);
}

namespace detail {

/// Spectrum of conj(f) from the spectrum of f: out(m) = conj(in(-m)).
inline std::vector<Complex> conj_spectrum(const std::vector<Complex>& in, const TorusGrid& g) {
  const std::size_t n = g.num_points();
  std::vector<Complex> out(n);
  for (std::size_t s = 0; s < n; ++s) {
    const long m = g.mode_index(s);
    const std::size_t src = (m == -static_cast<long>(n) / 2) ? s : g.storage_index(-m);
    out[s] = std::conj(in[src]);
  }
  return out;
}

inline void project_hermitian_inplace(std::vector<Complex>& v, const TorusGrid& g) {
  const std::size_t n = g.num_points();
  for (std::size_t s = 0; s < n / 2; ++s) {
    const long m = g.mode_index(s);
    if (m == 0) {
      v[s] = Complex(v[s].real(), 0.0);
      continue;
    }
    const std::size_t p = g.storage_index(-m);
    const Complex a = 0.5 * (v[s] + std::conj(v[p]));
    v[s] = a;
    v[p] = std::conj(a);
  }
  v[n / 2] = Complex(v[n / 2].real(), 0.0);  // Nyquist slot
}

inline std::vector<Complex> forward_product(const std::vector<Complex>& samples,
                                            const TorusGrid& g, bool dealias) {
  std::vector<Complex> coeffs(samples.size());
  dft_for(samples.size()).forward(samples, coeffs);
  if (dealias) dealias_inplace(coeffs, g);
  return coeffs;
}

}  // namespace detail

inline bool all_finite(const SpectralField& f) {
  for (const auto& v : f.coeffs()) {
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) return false;
  }
  return true;
}

}  // namespace kgz
