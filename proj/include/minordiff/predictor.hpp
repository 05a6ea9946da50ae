#pragma once

#include <cmath>
#include <complex>
#include <stdexcept>
#include <vector>

#include "minordiff/common.hpp"
#include "minordiff/quadrature.hpp"
#include "minordiff/spectral.hpp"
#include "minordiff/test_function.hpp"

namespace minordiff {

/// Deterministic outputs for one (f, phi, ensemble) triple: the limit
/// omega_f of the minor-difference statistic and the variance split
/// v_f = v_f1 + (sigma4 - 1) v_f2 + |sigma2|^2 v_sigma2.
struct PredictionReport {
  double omega_f = 0.0;
  double v_f1 = 0.0;
  double v_f2 = 0.0;
  double v_sigma2 = 0.0;
  double v_f = 0.0;
  double omega_err = 0.0;
  double v_f1_err = 0.0;
  double v_f2_err = 0.0;
  double v_sigma2_err = 0.0;
  Regime regime = Regime::Square;
  double phi = 1.0;
  cplx sigma2{0.0, 0.0};
  double sigma4 = 1.0;
  bool zero_variance = false;
};

namespace detail {

constexpr int kOmegaNodes = 2048;
constexpr int kVarianceNodes = 2048;

// The bulk part of omega: f(x) (1 + (sqrt(phi)-1/sqrt(phi))/x) against
// the arcsine weight. The 1/x factor is bounded on the bulk for every
// rectangular ratio; for phi = 1 it is absent.
template <class F>
double omega_bulk(const F& f, double phi, const Edges& e, int n) {
  const double b = std::sqrt(phi) - 1.0 / std::sqrt(phi);
  return arcsine_integral([&](double x) { return f(x) * (1.0 + b / x); }, e, n);
}

}  // namespace detail

/// omega_f. The square regime adds f(0)/2. A ratio phi < 1 adds the
/// full atom term f(0): the minor has one fewer zero eigenvalue than
/// the full matrix, so the count difference contributes exactly one
/// f(0) to the statistic.
inline Quad omega_q(const TestFunction& f, const Ratio& r, int n = detail::kOmegaNodes) {
  const Edges e = edges(r);
  const double v1 = detail::omega_bulk(f.eval, r.phi, e, n);
  const double v2 = detail::omega_bulk(f.eval, r.phi, e, 2 * n);
  double atom = 0.0;
  if (r.regime == Regime::Square)
    atom = 0.5 * f.eval(0.0);
  else if (r.phi < 1.0)
    atom = f.eval(0.0);
  return {v2 + atom, std::abs(v2 - v1)};
}

inline double omega(const TestFunction& f, const Ratio& r) { return omega_q(f, r).value; }

/// v_f1 = Var of f' under the semicircle weight x rho_phi(x) / sqrt(phi).
inline Quad v_f1_q(const TestFunction& f, const Ratio& r, int n = detail::kVarianceNodes) {
  const Edges e = edges(r);
  auto second = [&](int nn) { return semicircle_integral([&](double x) { return sqr(f.deriv(x)); }, e, nn); };
  auto first = [&](int nn) { return semicircle_integral(f.deriv, e, nn); };
  const double v1 = second(n) - sqr(first(n));
  const double v2 = second(2 * n) - sqr(first(2 * n));
  return {v2, std::abs(v2 - v1)};
}

/// v_f2 = (mean of f' under the same weight)^2.
inline Quad v_f2_q(const TestFunction& f, const Ratio& r, int n = detail::kVarianceNodes) {
  const Edges e = edges(r);
  const double v1 = sqr(semicircle_integral(f.deriv, e, n));
  const double v2 = sqr(semicircle_integral(f.deriv, e, 2 * n));
  return {v2, std::abs(v2 - v1)};
}

inline double v_f1(const TestFunction& f, const Ratio& r) { return v_f1_q(f, r).value; }
inline double v_f2(const TestFunction& f, const Ratio& r) { return v_f2_q(f, r).value; }

namespace detail {

// Imaginary-part moments t_m = (1/pi) Im int f'(x) w(x)^m dx over the
// bulk, where w(x) = e^{i(pi - alpha)} under x = center + 2 cos(alpha).
// Computed for m = 2, 3, ... by accumulating powers at the quadrature
// nodes; v_sigma2 = sum_{m>=2} s^{2m-2} t_m^2 with s = |sigma2|.
inline double v_sigma2_series(const TestFunction& f, const Edges& e, double s, int n) {
  const double c = e.center();
  std::vector<double> fp(n), sina(n);
  std::vector<cplx> w(n), wp(n);
  for (int k = 0; k < n; ++k) {
    const double al = (k + 0.5) * kPi / n;
    sina[k] = std::sin(al);
    fp[k] = f.deriv(c + 2.0 * std::cos(al));
    w[k] = cplx(-std::cos(al), sina[k]);
    wp[k] = w[k] * w[k];  // start at m = 2
  }
  double total = 0.0;
  int consecutive_small = 0;
  const int max_terms = 10000;
  for (int m = 2; m < 2 + max_terms; ++m) {
    double tm = 0.0;
    for (int k = 0; k < n; ++k) tm += fp[k] * wp[k].imag() * sina[k];
    tm *= 2.0 / n;
    const double term = std::pow(s, 2 * m - 2) * tm * tm;
    total += term;
    consecutive_small = (term < 1e-14) ? consecutive_small + 1 : 0;
    if (consecutive_small >= 3) return total;
    for (int k = 0; k < n; ++k) wp[k] *= w[k];
  }
  throw std::runtime_error("v_sigma2 series did not converge within 10000 terms");
}

}  // namespace detail

/// v_sigma2. Geometric series for |sigma2| < 1; for |sigma2| = 1 the
/// value is v_f1 by definition (and the series limit agrees with it
/// continuously). |sigma2| > 1 is impossible for a unit-variance entry.
inline Quad v_sigma2_q(const TestFunction& f, const Ratio& r, cplx sigma2,
                       int n = detail::kVarianceNodes) {
  const double s = std::abs(sigma2);
  require(s <= 1.0, "|sigma2| > 1 violates the Cauchy-Schwarz bound on a unit-variance entry");
  if (s == 1.0) {
    const Quad v = v_f1_q(f, r, n);
    return {v.value, v.error};
  }
  const Edges e = edges(r);
  const double v1 = detail::v_sigma2_series(f, e, s, n);
  const double v2 = detail::v_sigma2_series(f, e, s, 2 * n);
  return {v2, std::abs(v2 - v1)};
}

inline double v_sigma2(const TestFunction& f, const Ratio& r, cplx sigma2) {
  return v_sigma2_q(f, r, sigma2).value;
}

/// Double-integral form of v_sigma2 (|sigma2| < 1), used as an
/// independent cross-check of the series route:
///   (1/2pi^2) Re II f'(x) f'(x') [ s^2 w^2 cw'^2 / (1 - s^2 w cw')
///                                - s^2 w^2 w'^2 / (1 - s^2 w w') ] dx dx'
/// with w = w(x) on the bulk and cw' the conjugate at x'.
inline double v_sigma2_double_integral(const TestFunction& f, const Ratio& r, cplx sigma2,
                                       int n = 512) {
  const double s = std::abs(sigma2);
  require(s < 1.0, "double-integral form requires |sigma2| < 1");
  const Edges e = edges(r);
  const double c = e.center();
  const double s2 = s * s;
  std::vector<double> fpw(n);
  std::vector<cplx> w(n);
  for (int k = 0; k < n; ++k) {
    const double al = (k + 0.5) * kPi / n;
    const double sina = std::sin(al);
    w[k] = cplx(-std::cos(al), sina);
    // dx = 2 sin(alpha) d(alpha); fold the Jacobian into f'
    fpw[k] = f.deriv(c + 2.0 * std::cos(al)) * 2.0 * sina;
  }
  double total = 0.0;
  for (int i = 0; i < n; ++i) {
    const cplx wi2 = w[i] * w[i];
    for (int j = 0; j < n; ++j) {
      const cplx wcj = std::conj(w[j]);
      const cplx a = s2 * wi2 * wcj * wcj / (1.0 - s2 * w[i] * wcj);
      const cplx b = s2 * wi2 * w[j] * w[j] / (1.0 - s2 * w[i] * w[j]);
      total += fpw[i] * fpw[j] * (a - b).real();
    }
  }
  const double dal = kPi / n;
  return total * dal * dal / (2.0 * kPi * kPi);
}

/// Assembles the full report for an entry distribution with pseudo-moment
/// sigma2 and fourth moment sigma4.
inline PredictionReport predict(const TestFunction& f, const Ratio& r, cplx sigma2,
                                double sigma4) {
  require(sigma4 >= std::max(1.0, std::norm(sigma2)),
          "sigma4 must be >= max(1, |sigma2|^2) for a unit-variance entry");
  PredictionReport rep;
  rep.regime = r.regime;
  rep.phi = r.phi;
  rep.sigma2 = sigma2;
  rep.sigma4 = sigma4;
  const Quad om = omega_q(f, r);
  const Quad v1 = v_f1_q(f, r);
  const Quad v2 = v_f2_q(f, r);
  const Quad vs = v_sigma2_q(f, r, sigma2);
  rep.omega_f = om.value;
  rep.omega_err = om.error;
  rep.v_f1 = v1.value;
  rep.v_f1_err = v1.error;
  rep.v_f2 = v2.value;
  rep.v_f2_err = v2.error;
  rep.v_sigma2 = vs.value;
  rep.v_sigma2_err = vs.error;
  rep.v_f = rep.v_f1 + (sigma4 - 1.0) * rep.v_f2 + std::norm(sigma2) * rep.v_sigma2;
  rep.zero_variance = rep.v_f < 1e-12;
  return rep;
}

}  // namespace minordiff
