#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <stdexcept>
#include <vector>

#include "kgz/torus_grid.hpp"

namespace kgz {

/// Fourier-diagonal operator: one complex value per mode, applied pointwise
/// to the coefficient vector. Composition is the pointwise product.
struct Multiplier {
  std::vector<Complex> values;  // indexed by storage slot

  std::size_t size() const { return values.size(); }

  static Multiplier identity(std::size_t n) {
    Multiplier m;
    m.values.assign(n, Complex(1.0, 0.0));
    return m;
  }

  Multiplier& operator*=(const Multiplier& other) {
    if (other.values.size() != values.size()) {
      throw std::invalid_argument("Multiplier: size mismatch in composition");
    }
    for (std::size_t s = 0; s < values.size(); ++s) values[s] *= other.values[s];
    return *this;
  }

  friend Multiplier operator*(Multiplier a, const Multiplier& b) {
    a *= b;
    return a;
  }

  Multiplier& operator+=(const Multiplier& other) {
    if (other.values.size() != values.size()) {
      throw std::invalid_argument("Multiplier: size mismatch in sum");
    }
    for (std::size_t s = 0; s < values.size(); ++s) values[s] += other.values[s];
    return *this;
  }

  friend Multiplier operator+(Multiplier a, const Multiplier& b) {
    a += b;
    return a;
  }

  Multiplier& scale(Complex factor) {
    for (auto& v : values) v *= factor;
    return *this;
  }

  /// True when values[-m] = conj(values[m]) for every mode pair, i.e. the
  /// operator maps real physical fields to real physical fields. The Nyquist
  /// slot is its own partner, so its value must be real.
  bool preserves_real_fields(const TorusGrid& grid, double tol = 1e-12) const {
    const std::size_t n = grid.num_points();
    if (values.size() != n) throw std::invalid_argument("Multiplier: size does not match grid");
    double max_abs = 0.0;
    for (const auto& v : values) max_abs = std::max(max_abs, std::abs(v));
    const double bound = tol * std::max(max_abs, 1.0);
    for (std::size_t s = 0; s < n; ++s) {
      const long m = grid.mode_index(s);
      const std::size_t partner = (m == -static_cast<long>(n) / 2) ? s : grid.storage_index(-m);
      if (std::abs(values[s] - std::conj(values[partner])) > bound) return false;
    }
    return true;
  }
};

/// Builds a multiplier by evaluating a scalar symbol at each wavenumber.
template <typename SymbolFn>
Multiplier make_multiplier(const TorusGrid& grid, SymbolFn&& symbol) {
  Multiplier m;
  m.values.resize(grid.num_points());
  for (std::size_t s = 0; s < grid.num_points(); ++s) {
    m.values[s] = Complex(symbol(grid.wavenumber(s)));
  }
  return m;
}

}  // namespace kgz
