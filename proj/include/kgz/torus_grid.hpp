#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <memory>
#include <numbers>
#include <stdexcept>
#include <string>

namespace kgz {

using Complex = std::complex<double>;

/// Uniform periodic grid on the 1-D torus [0, length).
///
/// Nodes are x_j = j*length/N for j = 0..N-1 and the spectral mode set is
/// {-N/2, ..., N/2-1} with wavenumbers k_m = 2*pi*m/length. Coefficients are
/// stored in the usual FFT layout: storage slot s holds mode s for s < N/2
/// and mode s-N otherwise (the Nyquist slot N/2 holds mode -N/2).
class TorusGrid {
 public:
  explicit TorusGrid(std::size_t num_points,
                     double length = 2.0 * std::numbers::pi)
      : num_points_(num_points), length_(length) {
    if (num_points_ == 0 || num_points_ % 2 != 0) {
      throw std::invalid_argument("TorusGrid: num_points must be positive and even, got " +
                                  std::to_string(num_points_));
    }
    if (!(length_ > 0.0) || !std::isfinite(length_)) {
      throw std::invalid_argument("TorusGrid: length must be positive and finite");
    }
  }

  std::size_t num_points() const { return num_points_; }
  double length() const { return length_; }

  double node(std::size_t j) const { return length_ * static_cast<double>(j) / static_cast<double>(num_points_); }

  /// Signed mode index in [-N/2, N/2) for storage slot s in [0, N).
  long mode_index(std::size_t s) const {
    return s < num_points_ / 2 ? static_cast<long>(s)
                               : static_cast<long>(s) - static_cast<long>(num_points_);
  }

  /// Storage slot of the signed mode index m in [-N/2, N/2).
  std::size_t storage_index(long m) const {
    return m >= 0 ? static_cast<std::size_t>(m)
                  : static_cast<std::size_t>(m + static_cast<long>(num_points_));
  }

  double wavenumber(std::size_t s) const {
    return 2.0 * std::numbers::pi * static_cast<double>(mode_index(s)) / length_;
  }

  bool compatible(const TorusGrid& other) const {
    return num_points_ == other.num_points_ && length_ == other.length_;
  }

 private:
  std::size_t num_points_;
  double length_;
};

using GridPtr = std::shared_ptr<const TorusGrid>;

inline GridPtr make_grid(std::size_t num_points, double length = 2.0 * std::numbers::pi) {
  return std::make_shared<const TorusGrid>(num_points, length);
}

inline void require_compatible(const TorusGrid& a, const TorusGrid& b, const char* where) {
  if (!a.compatible(b)) {
    throw std::invalid_argument(std::string(where) + ": grid mismatch (N=" +
                                std::to_string(a.num_points()) + " vs N=" +
                                std::to_string(b.num_points()) + ")");
  }
}

}  // namespace kgz
