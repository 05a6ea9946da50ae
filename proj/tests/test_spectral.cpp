#include <catch2/catch_amalgamated.hpp>
#include <cmath>
#include <limits>

#include "minordiff/quadrature.hpp"
#include "minordiff/rng.hpp"
#include "minordiff/spectral.hpp"

using namespace minordiff;
using Catch::Matchers::WithinAbs;

TEST_CASE("edges of the bulk") {
  CHECK_THAT(edges(1.0).gamma_minus, WithinAbs(0.0, 1e-15));
  CHECK_THAT(edges(1.0).gamma_plus, WithinAbs(4.0, 1e-15));
  CHECK_THAT(edges(4.0).gamma_minus, WithinAbs(0.5, 1e-15));
  CHECK_THAT(edges(4.0).gamma_plus, WithinAbs(4.5, 1e-15));
  // invariant under phi <-> 1/phi
  CHECK_THAT(edges(0.25).gamma_minus, WithinAbs(0.5, 1e-15));
  CHECK_THAT(edges(0.25).gamma_plus, WithinAbs(4.5, 1e-15));
  CHECK_THROWS_AS(edges(-1.0), std::domain_error);
  CHECK_THROWS_AS(edges(0.0), std::domain_error);
}

TEST_CASE("ratio regimes") {
  CHECK(make_ratio(1.0).regime == Regime::Square);
  CHECK(make_ratio(4.0).regime == Regime::Rectangular);
  CHECK(make_ratio(0.25).regime == Regime::Rectangular);
  CHECK_THROWS_AS(make_ratio(1.01), RegimeError);
  CHECK_THROWS_AS(make_ratio(0.96), RegimeError);
  CHECK(make_ratio(1.02, 0.01).regime == Regime::Rectangular);
  CHECK_THROWS_AS(make_ratio(1.05), RegimeError);  // d_star boundary is exclusive
}

TEST_CASE("density values") {
  CHECK_THAT(mp_density(2.0, 1.0), WithinAbs(1.0 / (2.0 * kPi), 1e-12));
  CHECK(mp_density(5.0, 1.0) == 0.0);
  CHECK(mp_density(-1.0, 1.0) == 0.0);
  CHECK(mp_density(edges(4.0).gamma_minus, 4.0) == 0.0);
  CHECK(std::isinf(mp_density(0.0, 1.0)));
  CHECK_THAT(mp_atom(0.25), WithinAbs(0.75, 1e-15));
  CHECK(mp_atom(4.0) == 0.0);
}

TEST_CASE("stieltjes transform basics") {
  CHECK_THROWS_AS(stieltjes_m(cplx(2.0, 0.0), 1.0), std::domain_error);

  // decay at infinity
  const cplx z(0.0, 1e6);
  CHECK(std::abs(stieltjes_m(z, 1.0) - (-1.0 / z)) < 1e-5 * std::abs(1.0 / z));

  // inversion toward the density
  CHECK_THAT(stieltjes_m(cplx(2.0, 1e-6), 1.0).imag() / kPi,
             WithinAbs(1.0 / (2.0 * kPi), 1e-4));
}

TEST_CASE("self-consistency residual on random points") {
  Philox rng(11, 0);
  for (const double phi : {1.0, 4.0, 0.25}) {
    const Edges e = edges(phi);
    for (int i = 0; i < 200; ++i) {
      const double x = e.gamma_minus - 3.0 + 10.0 * rng.uniform01();
      const double eta = std::pow(10.0, -3.0 + 4.0 * rng.uniform01());
      const cplx z(x, eta);
      CHECK(self_consistency_residual(z, phi) < 1e-12);
      CHECK(stieltjes_m(z, phi).imag() > 0.0);
      // conjugate symmetry
      CHECK(std::abs(stieltjes_m(std::conj(z), phi) - std::conj(stieltjes_m(z, phi))) < 1e-15);
    }
  }
}

TEST_CASE("swap relation against direct evaluation") {
  CHECK(std::abs(stieltjes_m_swap(cplx(1.0, 1.0), 4.0) - stieltjes_m(cplx(1.0, 1.0), 0.25)) <
        1e-12);
  // collapses at phi = 1
  const cplx z(2.3, 0.7);
  CHECK(std::abs(stieltjes_m_swap(z, 1.0) - stieltjes_m(z, 1.0)) < 1e-15);
  // large-|z| decay
  const cplx big(0.0, 1e6);
  CHECK(std::abs(stieltjes_m_swap(big, 4.0) - (-1.0 / big)) < 1e-5 * std::abs(1.0 / big));
}

TEST_CASE("semicircle transform") {
  // center of the bulk maps to i
  const double c4 = edges(4.0).center();
  CHECK(std::abs(w_semicircle(cplx(c4, 0.0), 4.0) - cplx(0.0, 1.0)) < 1e-14);
  CHECK(std::abs(w_semicircle(cplx(2.0, 0.0), 1.0) - cplx(0.0, 1.0)) < 1e-14);

  // |w| = 1 on the bulk
  for (int i = 0; i <= 100; ++i) {
    const double x = 4.5 * i / 100.0;
    if (x < 0.5) continue;
    CHECK_THAT(std::abs(w_semicircle(cplx(x, 0.0), 4.0)), WithinAbs(1.0, 1e-13));
  }

  Philox rng(12, 0);
  for (int i = 0; i < 200; ++i) {
    const double x = -2.5 + 10.0 * rng.uniform01();
    const double eta = std::pow(10.0, -3.0 + 4.0 * rng.uniform01());
    const cplx z(x, eta);
    CHECK(w_self_consistency_residual(z, 4.0) < 1e-12);
    // ratio-inversion invariance
    CHECK(std::abs(w_semicircle(z, 4.0) - w_semicircle(z, 0.25)) < 1e-12);
    // product identity with the two Stieltjes transforms
    const cplx expect = -z * stieltjes_m(z, 4.0) * stieltjes_m_swap(z, 4.0);
    CHECK(std::abs(w_semicircle(z, 4.0) - expect) < 1e-12);
  }
}

TEST_CASE("derivative of m matches finite differences") {
  Philox rng(13, 0);
  for (const double phi : {1.0, 4.0}) {
    for (int i = 0; i < 100; ++i) {
      const double x = -2.0 + 8.0 * rng.uniform01();
      const double eta = 0.05 + 2.0 * rng.uniform01();
      const cplx z(x, eta);
      const double h = 1e-5;
      const cplx fd = (stieltjes_m(z + h, phi) - stieltjes_m(z - h, phi)) / (2.0 * h);
      CHECK(std::abs(stieltjes_m_deriv(z, phi) - fd) < 1e-6);
    }
  }
}

TEST_CASE("bulk mass and first moment") {
  for (const double phi : {1.0, 4.0, 0.25}) {
    const Edges e = edges(phi);
    const double mass = arcsine_integral(
        [&](double x) {
          return mp_density(x, phi) * 2.0 * kPi *
                 std::sqrt((x - e.gamma_minus) * (e.gamma_plus - x));
        },
        e, 4096);
    CHECK_THAT(mass, WithinAbs(std::min(1.0, phi), 1e-8));
    CHECK_THAT(mass + mp_atom(phi), WithinAbs(1.0, 1e-8));
    // int x rho_phi(x) / sqrt(phi) dx = 1: the integrand is exactly the
    // semicircle weight, so the quadrature is testing the identity
    // x rho_phi(x)/sqrt(phi) = sqrt((x-gm)(gp-x))/(2 pi) pointwise too.
    double worst = 0.0;
    for (int i = 1; i < 100; ++i) {
      const double x = e.gamma_minus + (e.gamma_plus - e.gamma_minus) * i / 100.0;
      worst = std::max(worst, std::abs(x * mp_density(x, phi) / std::sqrt(phi) -
                                       std::sqrt((x - e.gamma_minus) * (e.gamma_plus - x)) /
                                           (2.0 * kPi)));
    }
    CHECK(worst < 1e-13);
    const double first = semicircle_integral([](double) { return 1.0; }, e, 64);
    CHECK_THAT(first, WithinAbs(1.0, 1e-12));
  }
}

TEST_CASE("stieltjes inversion converges linearly away from edges") {
  auto sup_err = [&](double eta) {
    double worst = 0.0;
    for (int i = 0; i <= 50; ++i) {
      const double x = 1.0 + 2.0 * i / 50.0;
      worst = std::max(worst, std::abs(stieltjes_m(cplx(x, eta), 1.0).imag() / kPi -
                                       mp_density(x, 1.0)));
    }
    return worst;
  };
  const double e2 = sup_err(1e-2), e3 = sup_err(1e-3), e4 = sup_err(1e-4);
  CHECK(e3 < e2);
  CHECK(e4 < e3);
  CHECK(e4 / e2 < 0.05);  // consistent with O(eta)
}

TEST_CASE("stability bound certificates") {
  for (const double phi : {1.0, 4.0}) {
    const auto fit = lemma31_scan(phi);
    INFO("phi=" << phi << " c=" << fit.c_lower << " c~=" << fit.c_tilde
                << " c^=" << fit.c_hat << " r=[" << fit.ratio_lo << "," << fit.ratio_hi << "]");
    CHECK(fit.points > 2000);
    CHECK(fit.c_lower > 0.0);
    CHECK(fit.c_tilde > 0.0);
    CHECK(fit.ratio_lo > 0.0);
    CHECK(std::isfinite(fit.c_hat));

    // frozen windows hold on the standard grid and under refinement
    const Lemma31Constants frozen;
    for (const auto& f : {fit, lemma31_scan(phi, 201, 61)}) {
      CHECK(f.c_lower >= frozen.c_lower);
      CHECK(f.c_tilde >= frozen.c_tilde);
      CHECK(f.c_hat <= frozen.c_hat);
      CHECK(f.ratio_lo >= frozen.ratio_lo);
      CHECK(f.ratio_hi <= frozen.ratio_hi);
    }
  }
  // the certificate record carries the pass flags
  const auto cert = lemma31_certificates(cplx(2.0, 0.5), 1.0);
  CHECK(cert.pass());
  CHECK(cert.bound_m2 < 1.0);
  CHECK_THROWS_AS(lemma31_certificates(cplx(30.0, 1.0), 1.0), std::domain_error);
}
