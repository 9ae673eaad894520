#pragma once

#include <cmath>
#include <complex>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "kgz/spectral_field.hpp"
#include "kgz/symbols.hpp"
#include "kgz/torus_grid.hpp"

namespace kgz {

/// Plasma frequency, grid and product options; fixes every operator symbol.
struct ModelParams {
  double c;
  GridPtr grid;
  bool dealias = false;

  ModelParams(double c_, GridPtr grid_, bool dealias_ = false)
      : c(c_), grid(std::move(grid_)), dealias(dealias_) {
    symbols::require_c(c);
    if (!grid) throw std::invalid_argument("ModelParams: null grid");
  }
};

/// One time slice of the original second-order system: (z, dz/dt, n, dn/dt),
/// all real-valued in physical space.
struct PhysicalState {
  SpectralField z;
  SpectralField zdot;
  SpectralField n;
  SpectralField ndot;
};

/// One time slice of the reformulated first-order system. The evolved wave
/// variable is G = (c<grad>_c)^{-1} F rather than F = du/dt itself; F is
/// recovered by one multiplier application where needed. sF carries the
/// running Duhamel sum that replaces the antiderivative of F.
struct KgzState {
  SpectralField u;
  SpectralField G;
  SpectralField n;
  SpectralField ndot;
  SpectralField sF;
  double time = 0.0;
};

/// u = z - i c^{-1} <grad>_c^{-1} dz/dt, the first-order-in-time variable of
/// the Klein-Gordon part.
inline SpectralField to_twisted(const PhysicalState& p, const ModelParams& params) {
  require_compatible(p.z.grid(), *params.grid, "to_twisted");
  require_compatible(p.zdot.grid(), *params.grid, "to_twisted");
  const auto& g = *params.grid;
  const double c = params.c;
  std::vector<Complex> u(g.num_points());
  for (std::size_t s = 0; s < u.size(); ++s) {
    const double k = g.wavenumber(s);
    const double inv = 1.0 / (c * std::sqrt(k * k + c * c));
    u[s] = p.z.coeff(s) - Complex(0.0, inv) * p.zdot.coeff(s);
  }
  return SpectralField(params.grid, std::move(u), false);
}

/// z = (u + conj(u))/2; identical to the hermitian projection of u.
inline SpectralField to_physical_z(const SpectralField& u) { return hermitian_projection(u); }

namespace detail {

/// Spectrum of the pointwise product of a real field a and the real samples b.
inline SpectralField real_product_spectrum(const GridPtr& grid, const std::vector<double>& a,
                                           const std::vector<double>& b, bool dealias) {
  std::vector<Complex> prod(a.size());
  for (std::size_t j = 0; j < prod.size(); ++j) prod[j] = Complex(a[j] * b[j], 0.0);
  std::vector<Complex> coeffs(prod.size());
  dft_for(prod.size()).forward(prod, coeffs);
  if (dealias) dealias_inplace(coeffs, *grid);
  return SpectralField(grid, std::move(coeffs), true);
}

}  // namespace detail

/// Initial data for either scheme. G0 is assembled directly as
/// i u0 + (i/2) <grad>_c^{-2} ( n0 (u0 + conj u0) ) so the inverse of
/// c<grad>_c is never formed. The running sum starts at
/// S0 = u0 - i (e^{i tau c<grad>_c} - 1) G0 for the first-order scheme and at
/// zero for the second-order scheme (which keeps u0 in the propagation
/// context instead).
inline KgzState initial_state(const PhysicalState& p, const ModelParams& params, double tau,
                              int scheme_order) {
  if (!(tau > 0.0) || !std::isfinite(tau)) {
    throw std::invalid_argument("initial_state: tau must be positive");
  }
  if (scheme_order != 1 && scheme_order != 2) {
    throw std::invalid_argument("initial_state: scheme_order must be 1 or 2");
  }
  const auto& g = *params.grid;
  const double c = params.c;

  // With dealiasing on, the state is kept band-limited from the start so the
  // per-step product truncation realizes the classical 2/3-rule scheme.
  const PhysicalState* input = &p;
  PhysicalState truncated{p.z, p.zdot, p.n, p.ndot};
  if (params.dealias) {
    auto truncate = [&](const SpectralField& f) {
      std::vector<Complex> cs(f.coeffs().begin(), f.coeffs().end());
      dealias_inplace(cs, g);
      return SpectralField(params.grid, std::move(cs), f.hermitian());
    };
    truncated = PhysicalState{truncate(p.z), truncate(p.zdot), truncate(p.n), truncate(p.ndot)};
    input = &truncated;
  }

  SpectralField u0 = to_twisted(*input, params);

  const auto n_phys = to_physical_real(input->n);
  std::vector<double> two_re_u(g.num_points());
  {
    const auto u_phys = to_physical(u0);
    for (std::size_t j = 0; j < two_re_u.size(); ++j) two_re_u[j] = 2.0 * u_phys[j].real();
  }
  SpectralField nu = detail::real_product_spectrum(params.grid, n_phys, two_re_u, params.dealias);

  std::vector<Complex> g0(g.num_points());
  for (std::size_t s = 0; s < g0.size(); ++s) {
    const double k = g.wavenumber(s);
    g0[s] = Complex(0.0, 1.0) * u0.coeff(s) +
            Complex(0.0, 0.5) / (k * k + c * c) * nu.coeff(s);
  }
  SpectralField G0(params.grid, std::move(g0), false);

  SpectralField s0 = SpectralField::zero(params.grid);
  if (scheme_order == 1) {
    // S0 = u0 + tau phi1(i tau c<grad>_c) F0 = u0 - i (E - 1) G0.
    std::vector<Complex> sv(g.num_points());
    for (std::size_t s = 0; s < sv.size(); ++s) {
      const double k = g.wavenumber(s);
      const Complex E = std::polar(1.0, tau * c * std::sqrt(k * k + c * c));
      sv[s] = u0.coeff(s) - Complex(0.0, 1.0) * (E - 1.0) * G0.coeff(s);
    }
    s0 = SpectralField(params.grid, std::move(sv), false);
  }

  return KgzState{std::move(u0), std::move(G0), hermitian_projection(input->n),
                  hermitian_projection(input->ndot), std::move(s0), 0.0};
}

/// The c-dependent benchmark initial data:
///   z(0,x)  = sin(x) / (4 (2 - cos 2x)),   dz/dt(0,x) = c^2 z(0,x),
///   n(0,x)  = sin(x) cos(x) / (2 - sin 2x), dn/dt(0,x) = sin(x)/2.
inline PhysicalState benchmark_initial_data(const GridPtr& grid, double c) {
  symbols::require_c(c);
  const std::size_t n = grid->num_points();
  std::vector<double> z(n), zdot(n), nw(n), ndot(n);
  for (std::size_t j = 0; j < n; ++j) {
    const double x = grid->node(j);
    z[j] = 0.25 * std::sin(x) / (2.0 - std::cos(2.0 * x));
    zdot[j] = c * c * z[j];
    nw[j] = std::sin(x) * std::cos(x) / (2.0 - std::sin(2.0 * x));
    ndot[j] = 0.5 * std::sin(x);
  }
  return PhysicalState{to_spectral(grid, std::span<const double>(z)),
                       to_spectral(grid, std::span<const double>(zdot)),
                       to_spectral(grid, std::span<const double>(nw)),
                       to_spectral(grid, std::span<const double>(ndot))};
}

namespace detail {

inline std::string format_g17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace detail

/// Snapshot export: physical samples of x, Re z, n, dn/dt, one row per node.
inline void write_snapshot_csv(std::ostream& os, const KgzState& state) {
  const auto& g = state.u.grid();
  const auto z = to_physical_real(to_physical_z(state.u));
  const auto n = to_physical_real(state.n);
  const auto nd = to_physical_real(state.ndot);
  os << "x,re_z,n,ndot\n";
  for (std::size_t j = 0; j < g.num_points(); ++j) {
    os << detail::format_g17(g.node(j)) << ',' << detail::format_g17(z[j]) << ','
       << detail::format_g17(n[j]) << ',' << detail::format_g17(nd[j]) << '\n';
  }
}

/// Reads physical initial data x,z,zdot,n,ndot sampled on exactly this grid.
inline PhysicalState read_initial_csv(std::istream& is, const GridPtr& grid) {
  std::string line;
  if (!std::getline(is, line)) throw std::invalid_argument("initial data: empty file");
  if (line == "x,z,zdot,n,ndot\r") line.pop_back();
  if (line != "x,z,zdot,n,ndot") {
    throw std::invalid_argument("initial data: expected header x,z,zdot,n,ndot");
  }
  const std::size_t n = grid->num_points();
  std::vector<double> z(n), zdot(n), nw(n), ndot(n);
  for (std::size_t j = 0; j < n; ++j) {
    if (!std::getline(is, line)) {
      throw std::invalid_argument("initial data: expected " + std::to_string(n) + " rows");
    }
    std::istringstream row(line);
    double vals[5];
    std::string cell;
    for (double& v : vals) {
      if (!std::getline(row, cell, ',')) {
        throw std::invalid_argument("initial data: malformed row " + std::to_string(j + 2));
      }
      v = std::stod(cell);
    }
    if (std::abs(vals[0] - grid->node(j)) > 1e-9 * grid->length()) {
      throw std::invalid_argument("initial data: node " + std::to_string(j) +
                                  " does not lie on the grid");
    }
    z[j] = vals[1];
    zdot[j] = vals[2];
    nw[j] = vals[3];
    ndot[j] = vals[4];
  }
  if (std::getline(is, line) && !line.empty()) {
    throw std::invalid_argument("initial data: trailing rows beyond grid size");
  }
  return PhysicalState{to_spectral(grid, std::span<const double>(z)),
                       to_spectral(grid, std::span<const double>(zdot)),
                       to_spectral(grid, std::span<const double>(nw)),
                       to_spectral(grid, std::span<const double>(ndot))};
}

}  // namespace kgz
