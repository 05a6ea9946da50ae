// Acceptance suite: end-to-end checks of the analytic layer, the
// predictor, and the Monte Carlo harness at desk scale. Prints one
// PASS/FAIL line per criterion and exits nonzero if any fail.

#include <cmath>
#include <cstdio>
#include <vector>

#include "minordiff/harness.hpp"
#include "minordiff/verify.hpp"

using namespace minordiff;

namespace {

int g_failures = 0;

void report(int idx, const char* what, bool ok, const std::string& detail) {
  std::printf("%s criterion %d: %s (%s)\n", ok ? "PASS" : "FAIL", idx, what, detail.c_str());
  std::fflush(stdout);
  if (!ok) ++g_failures;
}

std::string fmt(const char* pattern, double a, double b = 0.0, double c = 0.0) {
  char buf[256];
  std::snprintf(buf, sizeof(buf), pattern, a, b, c);
  return buf;
}

// ---------------------------------------------------------------- 1
void criterion_analytic_suite() {
  double worst_m = 0.0, worst_w = 0.0, worst_mass = 0.0, worst_first = 0.0;
  bool lemma_ok = true;
  for (const double phi : {1.0, 4.0}) {
    const Edges e = edges(phi);
    for (int i = 0; i < 101; ++i) {
      const double x = (e.gamma_minus - 3.0) + 10.0 * i / 100.0;
      for (int j = 0; j < 31; ++j) {
        const double eta = 1e-3 * std::pow(1e4, j / 30.0);
        const cplx z(x, eta);
        worst_m = std::max(worst_m, self_consistency_residual(z, phi));
        const cplx w = w_semicircle(z, phi);
        worst_w = std::max(worst_w,
                           std::abs(w + z * stieltjes_m(z, phi) * stieltjes_m_swap(z, phi)));
        if (std::abs(z - cplx(std::sqrt(phi))) <= 10.0)
          lemma_ok = lemma_ok && lemma31_certificates(z, phi).pass();
      }
    }
    const double mass = arcsine_integral(
        [&](double x) {
          return mp_density(x, phi) * 2.0 * kPi *
                 std::sqrt((x - e.gamma_minus) * (e.gamma_plus - x));
        },
        e, 4096);
    worst_mass = std::max(worst_mass, std::abs(mass - 1.0));  // phi >= 1 here
    worst_first =
        std::max(worst_first, std::abs(semicircle_integral([](double) { return 1.0; }, e, 4096) - 1.0));
  }
  const bool ok = worst_m < 1e-12 && worst_w < 1e-12 && worst_mass < 1e-8 &&
                  worst_first < 1e-8 && lemma_ok;
  report(1, "analytic suite on the standard grid", ok,
         fmt("max residuals: m %.2e, w %.2e, mass %.2e", worst_m, worst_w,
             std::max(worst_mass, worst_first)) + (lemma_ok ? ", bounds hold" : ", bounds FAIL"));
}

// ---------------------------------------------------------------- 2
void criterion_predictor_exactness() {
  const auto& one = find_test_function("one");
  const auto& id = find_test_function("id");
  const Ratio r1 = make_ratio(1.0), r4 = make_ratio(4.0);

  const double om_one_1 = omega(one, r1), om_one_4 = omega(one, r4);
  // the square-regime value splits as integral 1/2 plus atom 1/2
  const double integral_half = om_one_1 - 0.5 * one.eval(0.0);
  bool ok = std::abs(om_one_1 - 1.0) < 1e-8 && std::abs(om_one_4 - 1.0) < 1e-8 &&
            std::abs(integral_half - 0.5) < 1e-8;
  ok = ok && std::abs(omega(id, r1) - 1.0) < 1e-6 && std::abs(omega(id, r4) - 2.0) < 1e-6;
  double comp_dev = 0.0;
  for (const Ratio& r : {r1, r4}) {
    comp_dev = std::max(comp_dev, std::abs(v_f1(id, r)));
    comp_dev = std::max(comp_dev, std::abs(v_f2(id, r) - 1.0));
    comp_dev = std::max(comp_dev, std::abs(v_sigma2(id, r, 0.7)));
  }
  ok = ok && comp_dev < 1e-8;
  report(2, "predictor exactness (omega and variance components)", ok,
         fmt("omega(1) dev %.2e, omega(x) dev %.2e, components dev %.2e",
             std::max(std::abs(om_one_1 - 1.0), std::abs(om_one_4 - 1.0)),
             std::max(std::abs(omega(id, r1) - 1.0), std::abs(omega(id, r4) - 2.0)), comp_dev));
}

// ---------------------------------------------------------------- 3
MCReport criterion_zero_fluctuation() {
  ExperimentConfig cfg;
  cfg.ensemble = "complex-bernoulli";
  cfg.function = "id";
  cfg.seed = 20260801;
  cfg.trials = 300;
  MCReport last;
  bool ok = true;
  double worst = 0.0;
  for (const double phi : {1.0, 4.0}) {
    cfg.phi = phi;
    cfg.n_list = {phi == 1.0 ? 64 : 32};
    const auto rep = run_experiment(cfg);
    ok = ok && rep.prediction.zero_variance;
    const double target = std::sqrt(phi);
    for (const double v : rep.per_n[0].fn_values)
      worst = std::max(worst, std::abs(v - target));
    ok = ok && rep.per_n[0].fn_summary.var <= 1e-20;
    if (phi == 1.0) last = rep;
  }
  ok = ok && worst <= 1e-10;
  report(3, "zero-fluctuation case is exact and flagged", ok,
         fmt("max |f_N - sqrt(phi)| = %.2e, flagged V_f = 0", worst));
  return last;
}

// ---------------------------------------------------------------- 4
void criterion_rank_one_oracle() {
  const Ratio r1 = make_ratio(1.0);
  const Edges e = edges(r1);
  std::vector<cplx> zs;
  for (const double x : {1.0, 2.0, 3.0, e.center(), e.gamma_plus})
    for (const double eta : {0.1, 1.0}) zs.push_back(cplx(x, eta));

  double worst_rel = 0.0, worst_eta = 0.0;
  for (int t = 0; t < 50; ++t) {
    Philox rng(555, 4000 + t);
    const auto sp = draw_sample_pair<cplx>(find_ensemble("complex-gaussian"), 64, 64, rng);
    const auto s = spectra(sp);
    const auto ge = make_gram_eigen(sp);
    for (const cplx z : zs) {
      const cplx d1 = delta_n_direct(s, z);
      const cplx d2 = delta_n_rank1(ge, z);
      worst_rel = std::max(worst_rel, std::abs(d1 - d2) / std::abs(d1));
      worst_eta = std::max(worst_eta, z.imag() * std::abs(d2));
    }
  }
  const bool ok = worst_rel <= 1e-10 && worst_eta <= 2.0;
  report(4, "rank-one resolvent oracle (50 draws x 10 points)", ok,
         fmt("max rel disagreement %.2e, max |eta Delta| %.3f", worst_rel, worst_eta));
}

// ------------------------------------------------------------- 5, 6, 7
// The exact mean of the f = x^2 statistic for the complex Gaussian at
// phi = 1 is 3 - 1/N, so the bias at N = 64/128/256 is 0.0156/0.0078/
// 0.0039 while the mean SE at T trials is sqrt(20/N)/sqrt(T). The trial
// counts below keep every bias gap above the joint noise, and the trend
// comparison allows one joint-SE of slack per step.
void criterion_clt_mean_variance() {
  ExperimentConfig cfg;
  cfg.ensemble = "complex-gaussian";
  cfg.function = "sq";
  cfg.phi = 1.0;
  cfg.seed = 20260802;

  std::vector<MCReport> runs;
  const std::pair<int, int> sizes[] = {{64, 24000}, {128, 12000}, {256, 6000}};
  for (const auto& [n, trials] : sizes) {
    cfg.n_list = {n};
    cfg.trials = trials;
    runs.push_back(run_experiment(cfg));
  }
  const auto& big = runs.back().per_n[0];
  const double omega_f = runs.back().prediction.omega_f;
  const double v_f = runs.back().prediction.v_f;

  {  // 5: mean at N = 256 plus the N-trend
    const double budget =
        std::max(3.0 * big.fn_summary.mean_se, 0.01 * std::abs(omega_f) + 0.02);
    const bool mean_ok = big.mean_error <= budget;
    bool trend_ok = true;
    for (int i = 1; i < 3; ++i) {
      const double slack = std::hypot(runs[i].per_n[0].fn_summary.mean_se,
                                      runs[i - 1].per_n[0].fn_summary.mean_se);
      trend_ok = trend_ok &&
                 runs[i].per_n[0].mean_error < runs[i - 1].per_n[0].mean_error + slack;
    }
    trend_ok = trend_ok && runs[2].per_n[0].mean_error <
                               0.8 * runs[0].per_n[0].mean_error +
                                   3.0 * std::hypot(runs[0].per_n[0].fn_summary.mean_se,
                                                    runs[2].per_n[0].fn_summary.mean_se);
    report(5, "CLT mean at N=256 with decreasing N-trend", mean_ok && trend_ok,
           fmt("|mean - omega| = %.4f vs budget %.4f; errors ", big.mean_error, budget) +
               fmt("%.4f, %.4f, %.4f over N = 64, 128, 256", runs[0].per_n[0].mean_error,
                   runs[1].per_n[0].mean_error, runs[2].per_n[0].mean_error));
  }
  {  // 6: variance at N = 256 and the exact f = x oracles
    const double budget = std::max(3.0 * big.var_sqrt_n_se, 0.15 * v_f);
    bool ok = std::abs(big.var_sqrt_n - v_f) <= budget;
    std::string detail = fmt("var %.3f vs V_f %.3f (budget %.3f)", big.var_sqrt_n, v_f, budget);

    ExperimentConfig oc;
    oc.function = "id";
    oc.phi = 1.0;
    oc.n_list = {128};
    oc.trials = 4000;
    oc.seed = 20260803;
    for (const auto& [ens, vexact] : std::vector<std::pair<std::string, double>>{
             {"complex-gaussian", 1.0}, {"real-gaussian", 2.0}}) {
      oc.ensemble = ens;
      const auto orep = run_experiment(oc);
      const double dev = std::abs(orep.per_n[0].var_sqrt_n - vexact);
      const double obudget = std::max(3.0 * orep.per_n[0].var_sqrt_n_se, 0.15 * vexact);
      ok = ok && std::abs(orep.prediction.v_f - vexact) < 1e-8 && dev <= obudget;
      detail += "; " + ens + " f=x var dev " + fmt("%.3f", dev);
    }
    report(6, "CLT variance vs predictions and exact f=x oracles", ok, detail);
  }
}

// The moment-bracketing case needs an observable whose moments converge
// fast: for f = x the statistic is a sum of M i.i.d. terms, so the skew
// is exactly skew(|entry|^2)/sqrt(M) = 2/32 at phi = 4, N = 256 - well
// inside a 99% CI at 3000 trials. (The f = x^2 statistic still carries
// skew ~ 0.3 at desk scale: moments converge only at the slow rate the
// variance tolerance already accounts for.)
void criterion_gaussianity(const MCReport& degenerate) {
  ExperimentConfig cfg;
  cfg.ensemble = "complex-gaussian";
  cfg.function = "id";
  cfg.phi = 4.0;
  cfg.n_list = {256};
  cfg.trials = 3000;
  cfg.seed = 20260804;
  const auto rep = run_experiment(cfg);
  const auto suite = gaussian_moment_suite(rep);
  bool ok = !suite.skipped;
  bool third_fourth = true;
  std::string detail;
  for (const auto& v : suite.verdicts) {
    detail += v.name + "=" + fmt("%.3f ", v.value);
    if (v.name.find("skewness") != std::string::npos ||
        v.name.find("kurtosis") != std::string::npos)
      third_fourth = third_fourth && v.status == "pass";
  }
  ok = ok && third_fourth;
  const auto skipped = gaussian_moment_suite(degenerate);
  ok = ok && skipped.skipped;
  report(7, "Gaussian moments bracket 0/3 at 99% CI; degenerate case skipped", ok,
         detail + (skipped.skipped ? "; degenerate skipped" : "; degenerate NOT skipped"));
}

// ---------------------------------------------------------------- 8
void criterion_two_resolvent() {
  const cplx z(2.0, 1.0), zp(3.0, 1.5);
  const int n = 256, draws = 50;

  cplx avg_tr = 0.0, avg_nt = 0.0, lim_tr, lim_nt;
  for (int t = 0; t < draws; ++t) {
    Philox rng(808, 7000 + t);
    const auto sp = draw_sample_pair<cplx>(find_ensemble("complex-gaussian"), n, n, rng);
    const auto ge = make_gram_eigen(sp, true);
    const auto rec = two_resolvent_stats(ge, z, zp, 1.0, 0.0, 2.0);
    avg_tr += rec.sum_tracial;
    avg_nt += rec.sum_nontracial;
    lim_tr = rec.limit_tracial;
    lim_nt = rec.limit_nontracial;
  }
  avg_tr /= double(draws);
  avg_nt /= double(draws);
  const double dev_tr = std::abs(avg_tr - lim_tr);
  const double dev_nt = std::abs(avg_nt - lim_nt);

  double ident = 0.0;
  for (int t = 0; t < 10; ++t) {
    Philox rng(808, 7500 + t);
    const auto sp = draw_sample_pair<double>(find_ensemble("real-gaussian"), n, n, rng);
    const auto ge = make_gram_eigen(sp, true);
    const auto rec = two_resolvent_stats(ge, z, zp, 1.0, 1.0, 3.0);
    ident = std::max(ident, std::abs(rec.sum_tracial - rec.sum_nontracial));
  }
  const bool ok = dev_tr <= 0.05 && dev_nt <= 0.05 && ident < 1e-12;
  report(8, "two-resolvent sums meet their limits at N=256", ok,
         fmt("tracial dev %.4f, non-tracial dev %.4f, real-case split %.1e", dev_tr, dev_nt,
             ident));
}

// ---------------------------------------------------------------- 9
void criterion_contour_reconstruction() {
  const Edges e = edges(1.0);
  const auto& bump = find_test_function("bump");
  const auto af = make_almost_analytic(bump, e);
  Philox rng(909, 1);
  const auto sp = draw_sample_pair<cplx>(find_ensemble("complex-gaussian"), 32, 32, rng);
  const auto s = spectra(sp);
  const auto ge = make_gram_eigen(sp);
  const double direct = linear_stat(bump, s);

  const double quad_tol = 2e-3;
  const auto h1 = hs_reconstruct(af, ge, 1e-3);
  const auto h2 = hs_reconstruct(af, ge, 5e-4);
  const double d1 = std::abs(h1.value - direct);
  const double d2 = std::abs(h2.value - direct);
  const bool ok = d1 <= 10.0 * 1e-3 + quad_tol && d2 < d1;
  report(9, "contour reconstruction matches the eigenvalue path", ok,
         fmt("|hs - f_N| = %.2e at eta0=1e-3 (budget %.2e), %.2e after halving", d1,
             10.0 * 1e-3 + quad_tol, d2));
}

}  // namespace

int main() {
  criterion_analytic_suite();
  criterion_predictor_exactness();
  const MCReport degenerate = criterion_zero_fluctuation();
  criterion_rank_one_oracle();
  criterion_clt_mean_variance();
  criterion_gaussianity(degenerate);
  criterion_two_resolvent();
  criterion_contour_reconstruction();
  std::printf("%s: %d criterion(s) failed\n", g_failures == 0 ? "ALL PASS" : "FAILURES",
              g_failures);
  return g_failures == 0 ? 0 : 1;
}
