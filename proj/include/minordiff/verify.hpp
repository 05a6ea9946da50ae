#pragma once

#include <cmath>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "minordiff/predictor.hpp"
#include "minordiff/quadrature.hpp"
#include "minordiff/spectral.hpp"
#include "minordiff/test_function.hpp"
#include "minordiff/almost_analytic.hpp"

namespace minordiff {

struct VerifyCheck {
  std::string name;
  bool pass = false;
  double value = 0.0;      // measured extremal value
  double threshold = 0.0;  // the bound it was held against
};

struct VerifyOptions {
  int grid_x = 101;
  int grid_eta = 31;
  int refine = 1;  // 2 doubles every node count
  // test hook: replaces w_semicircle in the identity checks
  std::function<cplx(cplx, double)> w_override;
};

struct VerifyResult {
  std::vector<VerifyCheck> checks;
  bool pass = true;
  void add(std::string name, double value, double threshold, bool ok) {
    checks.push_back({std::move(name), ok, value, threshold});
    pass = pass && ok;
  }
  void add_max(std::string name, double value, double threshold) {
    add(std::move(name), value, threshold, value <= threshold);
  }
  void add_min(std::string name, double value, double threshold) {
    add(std::move(name), value, threshold, value >= threshold);
  }
};

namespace detail {

template <class F>
void for_grid(double phi, int nx, int neta, F&& fn) {
  const Edges e = edges(phi);
  const double x0 = e.gamma_minus - 3.0, x1 = e.gamma_plus + 3.0;
  for (int i = 0; i < nx; ++i) {
    const double x = x0 + (x1 - x0) * i / (nx - 1);
    for (int j = 0; j < neta; ++j) {
      const double eta = 1e-3 * std::pow(10.0 / 1e-3, double(j) / (neta - 1));
      fn(cplx(x, eta));
    }
  }
}

}  // namespace detail

inline VerifyResult run_verify_suite(const VerifyOptions& opt = {}) {
  VerifyResult out;
  const int nx = opt.grid_x * opt.refine;
  const int neta = opt.grid_eta * opt.refine;
  auto w_eval = [&](cplx z, double phi) {
    return opt.w_override ? opt.w_override(z, phi) : w_semicircle(z, phi);
  };

  const double phis[3] = {1.0, 4.0, 0.25};
  for (const double phi : phis) {
    std::ostringstream tag;
    tag << "phi=" << phi;

    double worst_sc = 0.0, worst_conj = 0.0, worst_swap = 0.0;
    double worst_wsc = 0.0, worst_wid = 0.0, w_abs_min = 1e300, w_abs_max = 0.0;
    double denom_slack = 1e300;
    detail::for_grid(phi, nx, neta, [&](cplx z) {
      const cplx m = stieltjes_m(z, phi);
      // scaled by |m| where the transform is large (phi < 1 has a 1/z
      // pole at the atom, so the absolute residual is ill-conditioned)
      worst_sc = std::max(worst_sc,
                          self_consistency_residual(z, phi) / std::max(1.0, std::abs(m)));
      worst_conj = std::max(worst_conj, std::abs(stieltjes_m(std::conj(z), phi) - std::conj(m)));
      const cplx ms = stieltjes_m_swap(z, phi);
      const cplx direct = stieltjes_m(z, 1.0 / phi);
      worst_swap = std::max(worst_swap,
                            std::abs(ms - direct) / std::max(1.0, std::abs(direct)));
      worst_wsc = std::max(worst_wsc, w_self_consistency_residual(z, phi));
      const cplx w = w_eval(z, phi);
      worst_wid = std::max(worst_wid, std::abs(w - (-z * m * ms)));
      const double wa = std::abs(w);
      w_abs_min = std::min(w_abs_min, wa);
      w_abs_max = std::max(w_abs_max, wa);
      denom_slack = std::min(denom_slack, (1.0 - wa * wa) / z.imag());
    });
    out.add_max(tag.str() + " m self-consistency residual", worst_sc, 1e-12);
    out.add_max(tag.str() + " m conjugate symmetry", worst_conj, 1e-13);
    out.add_max(tag.str() + " m swap relation residual", worst_swap, 1e-12);
    out.add_max(tag.str() + " w self-consistency residual", worst_wsc, 1e-12);
    out.add_max(tag.str() + " w = -z m m_swap residual", worst_wid, 1e-12);
    out.add_min(tag.str() + " min |w| on grid", w_abs_min, 0.05);
    out.add_max(tag.str() + " max |w| on grid", w_abs_max, 1.0 + 1e-12);
    out.add_min(tag.str() + " (1-|w|^2)/eta lower bound", denom_slack, 1e-3);

    // boundary values on the bulk: |w(x)| = 1
    const Edges e = edges(phi);
    double worst_mod = 0.0;
    for (int i = 1; i < 200; ++i) {
      const double x = e.gamma_minus + (e.gamma_plus - e.gamma_minus) * i / 200.0;
      worst_mod = std::max(worst_mod, std::abs(std::abs(w_eval(cplx(x, 0.0), phi)) - 1.0));
    }
    out.add_max(tag.str() + " |w| = 1 on the bulk", worst_mod, 1e-12);

    // mass and first-moment normalization
    const double mass = arcsine_integral(
        [&](double x) { return mp_density(x, phi) * 2.0 * kPi *
                               std::sqrt((x - e.gamma_minus) * (e.gamma_plus - x)); },
        e, 4096);
    const double expected_mass = std::min(1.0, phi);
    out.add_max(tag.str() + " integral of the bulk density",
                std::abs(mass - expected_mass), 1e-8);
    const double first = semicircle_integral([](double) { return 1.0; }, e, 4096);
    out.add_max(tag.str() + " integral of x rho / sqrt(phi)", std::abs(first - 1.0), 1e-8);

    // w is ratio-inversion invariant
    if (phi != 1.0) {
      double worst_inv = 0.0;
      detail::for_grid(phi, nx / 2, neta / 2, [&](cplx z) {
        worst_inv = std::max(worst_inv, std::abs(w_eval(z, phi) - w_eval(z, 1.0 / phi)));
      });
      out.add_max(tag.str() + " w(phi) = w(1/phi)", worst_inv, 1e-12);
    }

    // stability bounds hold for phi >= 1 (below that the transform has
    // a 1/z pole from the atom and the bounds genuinely fail)
    if (phi >= 1.0) {
      const Lemma31Constants frozen;
      const auto fit = lemma31_scan(phi, nx, neta);
      out.add_min(tag.str() + " lemma bounds: lower constant", fit.c_lower, frozen.c_lower);
      out.add_min(tag.str() + " lemma bounds: eta slack constant", fit.c_tilde, frozen.c_tilde);
      out.add_max(tag.str() + " lemma bounds: derivative constant", fit.c_hat, frozen.c_hat);
      out.add_min(tag.str() + " lemma bounds: ratio window low", fit.ratio_lo, frozen.ratio_lo);
      out.add_max(tag.str() + " lemma bounds: ratio window high", fit.ratio_hi, frozen.ratio_hi);
    }

    // derivative of m against central differences; eta >= 0.1 keeps the
    // finite-difference truncation error below the tolerance
    double worst_md = 0.0;
    const Edges ed = edges(phi);
    for (int i = 0; i <= 24; ++i)
      for (int j = 0; j <= 8; ++j) {
        const double x = ed.gamma_minus - 3.0 + 10.0 * i / 24.0;
        const double eta = 0.1 * std::pow(100.0, j / 8.0);
        const cplx z(x, eta);
        const double h = 1e-5;
        const cplx fd = (stieltjes_m(z + h, phi) - stieltjes_m(z - h, phi)) / (2.0 * h);
        worst_md = std::max(worst_md, std::abs(stieltjes_m_deriv(z, phi) - fd));
      }
    out.add_max(tag.str() + " m' vs finite differences", worst_md, 1e-6);
  }

  {  // Stieltjes inversion toward the density
    const double target = 1.0 / (2.0 * kPi);
    const double got = stieltjes_m(cplx(2.0, 1e-6), 1.0).imag() / kPi;
    out.add_max("inversion at x=2, phi=1", std::abs(got - target), 1e-4);
    auto sup_err = [&](double eta) {
      double worst = 0.0;
      for (int i = 0; i <= 60; ++i) {
        const double x = 0.5 + 3.0 * i / 60.0;  // inside the bulk, away from 0 and 4
        worst = std::max(worst,
                         std::abs(stieltjes_m(cplx(x, eta), 1.0).imag() / kPi - mp_density(x, 1.0)));
      }
      return worst;
    };
    const double e2 = sup_err(1e-2), e4 = sup_err(1e-4);
    out.add_max("inversion sup error decays with eta", e4 / e2, 0.05);
  }

  {  // test-function library: closed-form derivatives vs differences
    const Edges e = edges(1.0);
    double worst1 = 0.0, worst2 = 0.0;
    for (const auto& f : builtin_test_functions()) {
      for (int i = 0; i <= 400; ++i) {
        const double x = (e.gamma_minus - 3.0) + 10.0 * i / 400.0;
        const double h = 1e-5;
        worst1 = std::max(worst1,
                          std::abs((f.eval(x + h) - f.eval(x - h)) / (2 * h) - f.deriv(x)));
        worst2 = std::max(worst2,
                          std::abs((f.deriv(x + h) - f.deriv(x - h)) / (2 * h) - f.deriv2(x)));
      }
    }
    out.add_max("library f' vs differences", worst1, 1e-6);
    out.add_max("library f'' vs differences", worst2, 1e-6);
  }

  {  // cutoff gluing and the dbar bound
    const Edges e = edges(1.0);
    const auto af = make_almost_analytic(find_test_function("bump"), e);
    double glue = 0.0;
    for (const double x : {af.chi.rise0, af.chi.rise1, af.chi.fall1, af.chi.fall0})
      glue = std::max({glue, std::abs(af.chi.d1(x)), std::abs(af.chi.d2(x))});
    out.add_max("cutoff derivatives vanish at gluing points", glue, 1e-10);

    double worst_ratio = 0.0;
    for (int i = 1; i <= 40; ++i) {
      const double eta = i * 0.025;
      for (int j = 0; j <= 40; ++j) {
        const double x = 1.0 + 2.0 * j / 40.0;
        worst_ratio = std::max(worst_ratio, std::abs(af.dbar_f_c(cplx(x, eta))) / eta);
      }
    }
    out.add_max("dbar f_C = O(eta) inside the plateau", worst_ratio, 10.0);
    double top = 0.0;
    for (int j = 0; j <= 40; ++j)
      top = std::max(top, std::abs(af.dbar_f_c(cplx(-3.0 + 10.0 * j / 40.0, 10.0))));
    out.add_max("dbar f_C vanishes at eta = 10", top, 0.0);
  }

  {  // predictor invariants
    const auto& one = find_test_function("one");
    const auto& id = find_test_function("id");
    for (const double phi : phis) {
      const Ratio r = make_ratio(phi);
      std::ostringstream tag;
      tag << "phi=" << phi;
      out.add_max(tag.str() + " omega(1) = 1", std::abs(omega(one, r) - 1.0), 1e-8);
      out.add_max(tag.str() + " omega(x) = sqrt(phi)",
                  std::abs(omega(id, r) - std::sqrt(phi)), 1e-6);
      out.add_max(tag.str() + " v_f1(x) = 0", std::abs(v_f1(id, r)), 1e-8);
      out.add_max(tag.str() + " v_f2(x) = 1", std::abs(v_f2(id, r) - 1.0), 1e-8);
      out.add_max(tag.str() + " v_sigma2(x) = 0", std::abs(v_sigma2(id, r, 0.5)), 1e-8);
    }
    const Ratio r1 = make_ratio(1.0);
    const auto& sq = find_test_function("sq");
    for (const double s : {0.3, 0.9}) {
      const double series = v_sigma2(sq, r1, s);
      const double direct = v_sigma2_double_integral(sq, r1, s);
      std::ostringstream tag;
      tag << "v_sigma2 series vs double integral, |sigma2|=" << s;
      out.add_max(tag.str(), std::abs(series - direct), 1e-6);
    }
    out.add_max("v_sigma2 at |sigma2|=1 equals v_f1",
                std::abs(v_sigma2(sq, r1, 1.0) - v_f1(sq, r1)), 0.0);

    const auto sq_scaled = scaled(sq, -2.5);
    out.add_max("omega scales linearly",
                std::abs(omega(sq_scaled, r1) + 2.5 * omega(sq, r1)), 1e-9);
    out.add_max("v_f1 scales quadratically",
                std::abs(v_f1(sq_scaled, r1) - 6.25 * v_f1(sq, r1)), 1e-9);
    const auto sq_shifted = shifted(sq, 17.0);
    out.add_max("v_f1 shift-invariant", std::abs(v_f1(sq_shifted, r1) - v_f1(sq, r1)), 0.0);
    out.add_max("v_f2 shift-invariant", std::abs(v_f2(sq_shifted, r1) - v_f2(sq, r1)), 0.0);

    const Quad stability = omega_q(find_test_function("exp-neg"), r1, 4096);
    out.add_max("omega stable under node doubling (relative)",
                stability.error / std::abs(stability.value), 1e-7);

    bool regime_rejected = false;
    try {
      make_ratio(1.05);
    } catch (const RegimeError&) {
      regime_rejected = true;
    }
    out.add("phi=1.05 rejected as out of regime", regime_rejected ? 1.0 : 0.0, 1.0,
            regime_rejected);
  }

  return out;
}

}  // namespace minordiff
