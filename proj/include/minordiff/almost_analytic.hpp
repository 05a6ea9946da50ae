#pragma once

#include <cmath>

#include "minordiff/common.hpp"
#include "minordiff/spectral.hpp"
#include "minordiff/test_function.hpp"

namespace minordiff {

namespace detail {

// C^infinity step built from exp(-1/t) mollifiers: 0 for t <= 0, 1 for
// t >= 1. Values below ~exp(-1000) are flushed to zero; they are far
// under double precision.
struct SmoothStep {
  static double val(double t) {
    if (t <= 1e-3) return 0.0;
    if (t >= 1.0 - 1e-3) return 1.0;
    const double a = std::exp(-1.0 / t);
    const double b = std::exp(-1.0 / (1.0 - t));
    return a / (a + b);
  }
  static double d1(double t) {
    if (t <= 1e-3 || t >= 1.0 - 1e-3) return 0.0;
    const double a = std::exp(-1.0 / t);
    const double b = std::exp(-1.0 / (1.0 - t));
    const double s = a + b;
    const double p = 1.0 / (t * t) + 1.0 / ((1.0 - t) * (1.0 - t));
    return a * b * p / (s * s);
  }
  static double d2(double t) {
    if (t <= 1e-3 || t >= 1.0 - 1e-3) return 0.0;
    const double a = std::exp(-1.0 / t);
    const double b = std::exp(-1.0 / (1.0 - t));
    const double s = a + b;
    const double t2 = t * t, u = 1.0 - t, u2 = u * u;
    const double p = 1.0 / t2 + 1.0 / u2;
    const double q = 1.0 / t2 - 1.0 / u2;
    const double pd = -2.0 / (t2 * t) + 2.0 / (u2 * u);
    const double sd = a / t2 - b / u2;
    return a * b * ((q * p + pd) / (s * s)) - 2.0 * a * b * p * sd / (s * s * s);
  }
};

}  // namespace detail

/// Smooth plateau cutoff: 0 outside [rise0, fall0], 1 on [rise1, fall1],
/// C^infinity ramps in between with closed-form first two derivatives.
struct SmoothCutoff {
  double rise0, rise1, fall1, fall0;

  double val(double x) const {
    if (x <= rise0 || x >= fall0) return 0.0;
    if (x < rise1) return detail::SmoothStep::val((x - rise0) / (rise1 - rise0));
    if (x <= fall1) return 1.0;
    return detail::SmoothStep::val((fall0 - x) / (fall0 - fall1));
  }
  double d1(double x) const {
    if (x <= rise0 || x >= fall0) return 0.0;
    if (x < rise1) {
      const double w = rise1 - rise0;
      return detail::SmoothStep::d1((x - rise0) / w) / w;
    }
    if (x <= fall1) return 0.0;
    const double w = fall0 - fall1;
    return -detail::SmoothStep::d1((fall0 - x) / w) / w;
  }
  double d2(double x) const {
    if (x <= rise0 || x >= fall0) return 0.0;
    if (x < rise1) {
      const double w = rise1 - rise0;
      return detail::SmoothStep::d2((x - rise0) / w) / (w * w);
    }
    if (x <= fall1) return 0.0;
    const double w = fall0 - fall1;
    return detail::SmoothStep::d2((fall0 - x) / w) / (w * w);
  }
};

/// Almost-analytic extension f_C(x + i eta) = (f_chi(x) + i eta f_chi'(x)) chit(eta)
/// of f_chi = f * chi, where chi is 1 on [gm-1, gp+1] and 0 outside
/// [gm-3, gp+3], and chit is 1 on [-5,5] and 0 outside [-10,10].
struct AlmostAnalytic {
  TestFunction f;
  SmoothCutoff chi;
  SmoothCutoff chi_tilde;

  double f_chi(double x) const { return f.eval(x) * chi.val(x); }
  double f_chi_d(double x) const { return f.deriv(x) * chi.val(x) + f.eval(x) * chi.d1(x); }
  double f_chi_dd(double x) const {
    return f.deriv2(x) * chi.val(x) + 2.0 * f.deriv(x) * chi.d1(x) + f.eval(x) * chi.d2(x);
  }

  cplx f_c(cplx z) const {
    const double x = z.real(), eta = z.imag();
    return (cplx(f_chi(x)) + cplx(0.0, eta) * f_chi_d(x)) * chi_tilde.val(eta);
  }

  /// dbar f_C = (i/2) [ eta f_chi''(x) chit(eta) + (f_chi(x) + i eta f_chi'(x)) chit'(eta) ];
  /// O(eta) near the real axis, identically zero at eta = 10.
  cplx dbar_f_c(cplx z) const {
    const double x = z.real(), eta = z.imag();
    require(eta > 0.0, "dbar_f_c requires Im z > 0");
    const cplx inner = cplx(eta * f_chi_dd(x)) * chi_tilde.val(eta) +
                       (cplx(f_chi(x)) + cplx(0.0, eta) * f_chi_d(x)) * chi_tilde.d1(eta);
    return cplx(0.0, 0.5) * inner;
  }

  double domain_lo() const { return chi.rise0; }
  double domain_hi() const { return chi.fall0; }
};

inline AlmostAnalytic make_almost_analytic(const TestFunction& f, const Edges& e) {
  SmoothCutoff chi{e.gamma_minus - 3.0, e.gamma_minus - 1.0, e.gamma_plus + 1.0,
                   e.gamma_plus + 3.0};
  SmoothCutoff chit{-10.0, -5.0, 5.0, 10.0};
  return {f, chi, chit};
}

}  // namespace minordiff
