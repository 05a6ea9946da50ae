#pragma once

#include <array>
#include <cmath>
#include <functional>

#include "minordiff/common.hpp"
#include "minordiff/spectral.hpp"

namespace minordiff {

struct Quad {
  double value = 0.0;
  double error = 0.0;  // |I_n - I_{2n}| refinement estimate
};

/// Integral of g against the arcsine weight 1/(2 pi sqrt((x-gm)(gp-x)))
/// over the bulk, via x = gm + (gp-gm) sin^2(theta) and the midpoint
/// rule in theta (equivalent to Gauss-Chebyshev of the first kind).
template <class G>
double arcsine_integral(G&& g, const Edges& e, int n) {
  const double width = e.gamma_plus - e.gamma_minus;
  double sum = 0.0;
  for (int k = 0; k < n; ++k) {
    const double th = (k + 0.5) * (0.5 * kPi) / n;
    const double s = std::sin(th);
    sum += g(e.gamma_minus + width * s * s);
  }
  return sum / (2.0 * n);
}

/// Integral of h against the semicircle weight
/// sqrt((x-gm)(gp-x)) / (2 pi) over the bulk (a probability measure),
/// via x = center + 2 cos(alpha); Gauss-Chebyshev of the second kind.
template <class H>
double semicircle_integral(H&& h, const Edges& e, int n) {
  const double c = e.center();
  double sum = 0.0;
  for (int k = 0; k < n; ++k) {
    const double al = (k + 0.5) * kPi / n;
    const double s = std::sin(al);
    sum += h(c + 2.0 * std::cos(al)) * s * s;
  }
  return 2.0 * sum / n;
}

template <class G>
Quad arcsine_integral_q(G&& g, const Edges& e, int n) {
  const double v1 = arcsine_integral(g, e, n);
  const double v2 = arcsine_integral(g, e, 2 * n);
  return {v2, std::abs(v2 - v1)};
}

template <class H>
Quad semicircle_integral_q(H&& h, const Edges& e, int n) {
  const double v1 = semicircle_integral(h, e, n);
  const double v2 = semicircle_integral(h, e, 2 * n);
  return {v2, std::abs(v2 - v1)};
}

/// 8-point Gauss-Legendre rule on [-1, 1].
struct GaussLegendre8 {
  static constexpr std::array<double, 8> nodes = {
      -0.9602898564975362, -0.7966664774136267, -0.5255324099163290, -0.1834346424956498,
      0.1834346424956498,  0.5255324099163290,  0.7966664774136267,  0.9602898564975362};
  static constexpr std::array<double, 8> weights = {
      0.1012285362903763, 0.2223810344533745, 0.3137066458778873, 0.3626837833783620,
      0.3626837833783620, 0.3137066458778873, 0.2223810344533745, 0.1012285362903763};
};

/// Composite Gauss-Legendre over [a, b] split into npanels equal panels.
template <class F>
double panel_gauss(F&& f, double a, double b, int npanels) {
  const double h = (b - a) / npanels;
  double sum = 0.0;
  for (int p = 0; p < npanels; ++p) {
    const double mid = a + (p + 0.5) * h;
    for (int k = 0; k < 8; ++k)
      sum += GaussLegendre8::weights[k] * f(mid + 0.5 * h * GaussLegendre8::nodes[k]);
  }
  return 0.5 * h * sum;
}

}  // namespace minordiff
