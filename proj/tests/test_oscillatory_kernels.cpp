#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <complex>
#include <numbers>
#include <random>

#include "kgz/phi_functions.hpp"
#include "kgz/symbols.hpp"
#include "oracles.hpp"

using kgz::Complex;
using kgz::PhiKind;

TEST_CASE("phi limit values at zero") {
  CHECK(kgz::phi1(Complex(0.0, 0.0)) == Complex(1.0, 0.0));
  CHECK(kgz::phi2(Complex(0.0, 0.0)) == Complex(0.5, 0.0));
  CHECK(kgz::psi2(Complex(0.0, 0.0)) == Complex(0.5, 0.0));
  // Near zero the Taylor branch must agree with phi2(z) = 1/2 + z/6 + O(z^2)
  // instead of blowing up through the cancelling closed form.
  const Complex z(0.0, 1e-8);
  CHECK(std::abs(kgz::phi2(z) - (0.5 + z / 6.0)) < 1e-10);
  CHECK(std::abs(kgz::phi2(z).real() - 0.5) < 1e-10);
}

TEST_CASE("phi1 closed form at i pi") {
  const Complex got = kgz::phi1(Complex(0.0, std::numbers::pi));
  const Complex expect(0.0, 2.0 / std::numbers::pi);
  CHECK(std::abs(got - expect) < 1e-15);
}

TEST_CASE("psi2 matches the Duhamel quadrature oracle") {
  // tau^2 Psi2(tau zeta) = int_0^tau xi e^{xi zeta} dxi; with tau = 1 this is
  // Psi2(zeta) = int_0^1 xi e^{xi zeta} dxi.
  // Frozen 50-digit value at zeta = 2i for a direct spot check.
  const Complex frozen(0.1006120042760552509486, 0.4353977749799916173478);
  CHECK(std::abs(kgz::psi2(Complex(0.0, 2.0)) - frozen) < 1e-14);

  std::mt19937 rng(5);
  std::uniform_real_distribution<double> dist(-8.0, 8.0);
  for (int rep = 0; rep < 20; ++rep) {
    const Complex zeta(dist(rng), dist(rng));
    const Complex quad = oracle::integrate(
        [zeta](double xi) { return xi * std::exp(xi * zeta); }, 0.0, 1.0, 1e-14);
    CHECK(std::abs(kgz::psi2(zeta) - quad) < 1e-12 * (1.0 + std::abs(quad)));
  }
}

TEST_CASE("phi recurrences hold on and off the imaginary axis") {
  std::mt19937 rng(17);
  std::uniform_real_distribution<double> angle(0.0, 2.0 * std::numbers::pi);
  for (double mag = 1e-12; mag <= 1.5e3; mag *= 10.0) {
    for (int rep = 0; rep < 16; ++rep) {
      // Alternate between the imaginary axis and random directions; cap the
      // real part so e^z stays bounded.
      Complex z = rep % 2 == 0 ? Complex(0.0, mag) : std::polar(mag, angle(rng));
      if (z.real() > 30.0) z = Complex(30.0, z.imag());
      const double scale = std::abs(kgz::phi0(z)) + 1.0;
      CHECK(std::abs(z * kgz::phi1(z) - (kgz::phi0(z) - 1.0)) <= 1e-12 * scale);
      CHECK(std::abs(z * kgz::phi2(z) - (kgz::phi1(z) - 1.0)) <= 1e-12 * scale);
      CHECK(std::abs(z * kgz::psi2(z) - (kgz::phi0(z) - kgz::phi1(z))) <= 1e-12 * scale);
    }
  }
}

TEST_CASE("phi values are continuous across the Taylor branch") {
  const double t = 1e-2;
  for (double arg = 0.0; arg < 6.3; arg += 0.7) {
    const Complex lo = std::polar(t * (1.0 - 1e-3), arg);
    const Complex hi = std::polar(t * (1.0 + 1e-3), arg);
    // The derivative of each phi is bounded by 1 near 0, so the gap between
    // the two evaluations is at most |lo - hi| ~ 2e-5 plus the branch error.
    CHECK(std::abs(kgz::phi1(lo) - kgz::phi1(hi)) < 1.1e-5);
    CHECK(std::abs(kgz::phi2(lo) - kgz::phi2(hi)) < 1.1e-5);
    CHECK(std::abs(kgz::psi2(lo) - kgz::psi2(hi)) < 1.1e-5);
    // And each side is within 1e-13 of the closed form evaluated well away
    // from cancellation via the recurrence z phi1 = e^z - 1.
    CHECK(std::abs(lo * kgz::phi1(lo) - (std::exp(lo) - 1.0)) < 1e-13);
    CHECK(std::abs(hi * kgz::phi1(hi) - (std::exp(hi) - 1.0)) < 1e-13);
  }
}

TEST_CASE("phi1 and phi2 are bounded by one on the imaginary axis") {
  for (double x = -100.0; x <= 100.0; x += 0.0831) {
    CHECK(std::abs(kgz::phi1(Complex(0.0, x))) <= 1.0 + 1e-14);
    CHECK(std::abs(kgz::phi2(Complex(0.0, x))) <= 1.0 + 1e-14);
  }
}

TEST_CASE("phi relative accuracy on the imaginary axis against quadrature") {
  for (double x : {0.5, 3.0, 17.0, 55.0, 100.0}) {
    const Complex z(0.0, x);
    const Complex q1 =
        oracle::integrate([z](double xi) { return std::exp(xi * z); }, 0.0, 1.0, 1e-14);
    CHECK(std::abs(kgz::phi1(z) - q1) <= 1e-13 * std::abs(q1));
  }
}

TEST_CASE("symbol builders: spot values") {
  const auto grid = kgz::make_grid(16);
  const auto br = kgz::symbols::bracket_c(*grid, 2.0);
  CHECK(br.values[3].real() == Catch::Approx(std::sqrt(13.0)).epsilon(1e-15));

  const auto sc = kgz::symbols::sinc_t_bracket0(*grid, 0.37);
  CHECK(sc.values[0] == Complex(1.0, 0.0));

  const auto psi = kgz::symbols::filter_psi(*grid, 0.1);
  CHECK(psi.values[0] == Complex(1.0, 0.0));
}

TEST_CASE("symbol builders reject c below one") {
  const auto grid = kgz::make_grid(8);
  CHECK_THROWS_AS(kgz::symbols::bracket_c(*grid, 0.5), std::invalid_argument);
  CHECK_THROWS_AS(kgz::symbols::a_c(*grid, 0.99), std::invalid_argument);
  CHECK_THROWS_AS(kgz::symbols::inv_bracket_c_sq(*grid, -2.0), std::invalid_argument);
}

TEST_CASE("A_c is evaluated without cancellation") {
  // Frozen 50-digit reference for c = 1e4, k = 1; the defining difference
  // c sqrt(c^2+k^2) - c^2 computed in doubles keeps only ~8 correct digits.
  const double reference = 0.49999999875000000625;
  const auto grid = kgz::make_grid(8);
  const auto m = kgz::symbols::a_c(*grid, 1e4);
  CHECK(std::abs(m.values[1].real() - reference) < 1e-14 * reference);

  const double naive = 1e4 * std::sqrt(1e8 + 1.0) - 1e8;
  CHECK(std::abs(naive - reference) > 1e-10 * reference);  // the naive form really does lose digits
}

TEST_CASE("A_c stays below k^2/2 and approaches -Delta/2 as c grows") {
  for (double c : {1.0, 10.0, 1000.0}) {
    const auto grid = kgz::make_grid(128);
    const auto m = kgz::symbols::a_c(*grid, c);
    for (std::size_t s = 0; s < m.size(); ++s) {
      const double k = grid->wavenumber(s);
      CHECK(m.values[s].real() <= 0.5 * k * k + 1e-12);
    }
  }
}

TEST_CASE("phi_of_operator evaluates the symbol mode-wise") {
  const auto grid = kgz::make_grid(16);
  const double c = 3.0, tau = 0.2;

  const auto id = kgz::symbols::phi_of_operator(PhiKind::phi1, Complex(0.0, 0.0),
                                                kgz::symbols::laplace(*grid));
  for (const auto& v : id.values) CHECK(v == Complex(1.0, 0.0));

  const auto m = kgz::symbols::phi_of_operator(PhiKind::phi1, Complex(0.0, -tau),
                                               kgz::symbols::c_bracket_plus_c2(*grid, c));
  CHECK(std::abs(m.values[0] - kgz::phi1(Complex(0.0, -2.0 * tau * c * c))) < 1e-15);

  const auto p = kgz::symbols::phi_of_operator(PhiKind::psi2, Complex(0.0, -tau),
                                               kgz::symbols::a_c(*grid, c));
  CHECK(std::abs(p.values[0] - Complex(0.5, 0.0)) < 1e-15);  // A_c vanishes at k = 0
}

TEST_CASE("unit modulus of the free phase symbol") {
  const auto grid = kgz::make_grid(64);
  const auto m = kgz::symbols::exp_i_t_c_bracket(*grid, 7.0, 0.83);
  for (const auto& v : m.values) CHECK(std::abs(std::abs(v) - 1.0) < 1e-15);
}

TEST_CASE("bracket symbol bounds from the operator lemma") {
  for (double c : {1.0, 10.0, 1000.0}) {
    for (int k = -64; k <= 64; ++k) {
      const double kk = k;
      const double br = std::sqrt(kk * kk + c * c);
      CHECK(c / br <= 1.0 + 1e-15);
      if (k != 0) CHECK(1.0 / (c * c + kk * kk) <= 1.0 / (c * std::abs(kk)) + 1e-15);
      CHECK(1.0 / (c * c + kk * kk) <= 1.0 / (c * c) + 1e-15);
      if (k != 0) CHECK(1.0 / (c * c + kk * kk) <= 1.0 / (kk * kk) + 1e-15);
    }
  }
}

TEST_CASE("filter deviation bound |psi - 1| <= tau^2 k^4 / 4") {
  const auto grid = kgz::make_grid(128);
  for (double tau : {0.5, 0.05, 0.001}) {
    const auto psi = kgz::symbols::filter_psi(*grid, tau);
    CHECK(psi.values[0] == Complex(1.0, 0.0));
    for (std::size_t s = 0; s < psi.size(); ++s) {
      const double k = grid->wavenumber(s);
      CHECK(std::abs(psi.values[s] - 1.0) <= 0.25 * tau * tau * k * k * k * k + 1e-15);
    }
  }
}

TEST_CASE("quotient symbols match their naive evaluation at benign arguments") {
  const auto grid = kgz::make_grid(32);
  const double c = 4.0, tau = 0.05;
  const Complex I(0.0, 1.0);

  const auto q1 = kgz::symbols::quotient_phi1_ac(*grid, c, tau);
  const auto qs = kgz::symbols::quotient_sum_correction(*grid, c, tau);
  const auto qp = kgz::symbols::quotient_phase_pair(*grid, c, tau);
  for (std::size_t s = 0; s < 32; ++s) {
    const double k = grid->wavenumber(s);
    const double br = std::sqrt(k * k + c * c);
    const double ac = c * br - c * c;

    const Complex naive1 = (oracle::phi1(I * tau * ac) - oracle::phi1(-2.0 * I * c * c * tau)) /
                           (I * tau * (c * br + c * c));
    CHECK(std::abs(q1.values[s] - naive1) < 1e-13);

    const Complex naive_s = (c / br) *
                            (oracle::phi1(-I * tau * c * br) - oracle::phi1(I * tau * c * c)) /
                            (-I * (c * br + c * c));
    CHECK(std::abs(qs.values[s] - naive_s) < 1e-13);

    const Complex naive_p = (oracle::phi1(-I * tau * ac) - oracle::phi1(2.0 * I * c * c * tau)) /
                            (-I * (br + c) * br);
    CHECK(std::abs(qp.values[s] - naive_p) < 1e-13);
  }
}
