// Minimal tour: predict the limit and variance for one (function,
// ratio, ensemble) triple, then draw a single sample and compare.

#include <cstdio>

#include "minordiff/lab.hpp"
#include "minordiff/predictor.hpp"

int main() {
  using namespace minordiff;

  const Ratio ratio = make_ratio(1.0);
  const TestFunction& f = find_test_function("sq");
  const EnsembleSpec& ens = find_ensemble("complex-gaussian");

  const PredictionReport pred = predict(f, ratio, ens.sigma2, ens.sigma4);
  std::printf("omega_f = %.6f, V_f = %.6f (= %.3f + %.1f*%.3f + |%.1f|^2*%.3f)\n",
              pred.omega_f, pred.v_f, pred.v_f1, pred.sigma4 - 1.0, pred.v_f2,
              std::abs(pred.sigma2), pred.v_sigma2);

  const int n = 128;
  Philox rng(/*seed=*/7, /*stream=*/0);
  const auto sample = draw_sample_pair<cplx>(ens, n, n, rng);
  const auto spectrum = spectra(sample);
  const double fn = linear_stat(f, spectrum);
  std::printf("one draw at N = %d: f_N = %.6f (deviation %.4f, fluctuation scale %.4f)\n", n,
              fn, fn - pred.omega_f, std::sqrt(pred.v_f / n));

  const auto ge = make_gram_eigen(sample);
  const cplx z(2.0, 0.5);
  std::printf("Delta_N(2 + 0.5i): spectral route %.6f%+.6fi, rank-one route %.6f%+.6fi\n",
              delta_n_direct(spectrum, z).real(), delta_n_direct(spectrum, z).imag(),
              delta_n_rank1(ge, z).real(), delta_n_rank1(ge, z).imag());
  return 0;
}
