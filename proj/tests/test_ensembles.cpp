#include <catch2/catch_amalgamated.hpp>
#include <cmath>

#include "minordiff/ensembles.hpp"

using namespace minordiff;
using Catch::Matchers::WithinAbs;

namespace {

// 10^6-draw moment check: mean, variance, sigma2, sigma4 each within
// five standard errors of the declared metadata.
void check_moments(const EnsembleSpec& spec) {
  Philox rng(1234, 99);
  const int n = 1000000;
  cplx sum = 0.0, sum2 = 0.0;
  double abs2 = 0.0, abs4 = 0.0;
  auto draw = [&]() -> cplx {
    if (spec.field == Field::Real) return spec.draw_real(rng);
    return spec.draw_complex(rng);
  };
  for (int i = 0; i < n; ++i) {
    const cplx u = draw();
    sum += u;
    sum2 += u * u;
    abs2 += std::norm(u);
    abs4 += std::norm(u) * std::norm(u);
  }
  const double se_mean = 5.0 / std::sqrt(double(n));
  INFO(spec.label);
  CHECK(std::abs(sum) / double(n) < se_mean);
  CHECK(std::abs(abs2 / n - 1.0) <
        5.0 * std::sqrt(std::max(spec.sigma4 - 1.0, 1e-12) / n) + 1e-9);
  CHECK(std::abs(sum2 / double(n) - spec.sigma2) < 5.0 * std::sqrt(spec.sigma4 / n) + 1e-9);
  // SE of the fourth moment from the eighth; 3 sigma4^2 is a generous proxy
  CHECK(std::abs(abs4 / n - spec.sigma4) < 5.0 * std::sqrt(3.0 * spec.sigma4 * spec.sigma4 / n));
}

}  // namespace

TEST_CASE("declared moment metadata is consistent for every builtin") {
  for (const auto& spec : builtin_ensembles()) check_moments(spec);
}

TEST_CASE("family-defined ensembles") {
  const auto tp = make_family_ensemble("two-point", {{"p", 0.2}});
  // p a^4 + (1-p) b^4 with a = 2, b = -1/2
  CHECK_THAT(tp.sigma4, WithinAbs(3.25, 1e-12));
  check_moments(tp);
  const auto uni = make_family_ensemble("uniform", {});
  CHECK_THAT(uni.sigma4, WithinAbs(1.8, 1e-15));
  CHECK_THROWS_AS(make_family_ensemble("two-point", {{"p", 1.5}}), std::invalid_argument);
  CHECK_THROWS_AS(make_family_ensemble("nope", {}), std::invalid_argument);
}

TEST_CASE("declared sigma values") {
  CHECK(find_ensemble("real-gaussian").sigma2 == cplx(1.0, 0.0));
  CHECK(find_ensemble("real-gaussian").sigma4 == 3.0);
  CHECK(find_ensemble("complex-gaussian").sigma2 == cplx(0.0, 0.0));
  CHECK(find_ensemble("complex-gaussian").sigma4 == 2.0);
  CHECK(find_ensemble("complex-bernoulli").sigma4 == 1.0);
  CHECK(find_ensemble("rademacher").sigma2 == cplx(1.0, 0.0));
  CHECK(find_ensemble("rademacher").sigma4 == 1.0);
  CHECK(find_ensemble("uniform").sigma4 == 9.0 / 5.0);
}

TEST_CASE("registration guards") {
  CHECK_THROWS_AS(make_ensemble("bad", Field::Real, 1.5, 3.0, nullptr, nullptr),
                  std::logic_error);
  CHECK_THROWS_AS(make_ensemble("bad", Field::Real, 0.0, 0.5, nullptr, nullptr),
                  std::logic_error);
}

TEST_CASE("unit modulus of the phase ensemble") {
  const auto& spec = find_ensemble("complex-bernoulli");
  Philox rng(5, 0);
  const int m = 16, n = 8;
  const auto x = sample_matrix<cplx>(spec, m, n, rng);
  const double expect = std::pow(double(m) * double(n), -0.25);
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < m; ++i)
      CHECK_THAT(std::abs(x(i, j)), WithinAbs(expect, 1e-15));
}

TEST_CASE("sampling determinism and matrix moments") {
  const auto& spec = find_ensemble("real-gaussian");
  const auto a = sample_matrix<double>(spec, 512, 512, 42, 7);
  const auto b = sample_matrix<double>(spec, 512, 512, 42, 7);
  CHECK(a == b);  // bit-identical for identical (seed, stream)
  const auto c = sample_matrix<double>(spec, 512, 512, 42, 8);
  CHECK(a != c);

  const double q = 1.0 / 512.0;  // E|entry|^2 = (MN)^{-1/2}
  const double n_entries = 512.0 * 512.0;
  const double mean = a.sum() / n_entries;
  CHECK(std::abs(mean) < 5.0 * std::sqrt(q / n_entries));
  double m4 = 0.0;
  for (int j = 0; j < 512; ++j)
    for (int i = 0; i < 512; ++i) m4 += std::pow(a(i, j), 4);
  m4 /= n_entries;
  const double sigma4_hat = m4 / (q * q);
  CHECK(std::abs(sigma4_hat - spec.sigma4) < 5.0 * std::sqrt(3.0 * 9.0 / n_entries));
}

TEST_CASE("field mismatch is rejected") {
  Philox rng(1, 1);
  CHECK_THROWS_AS(sample_matrix<double>(find_ensemble("complex-gaussian"), 4, 4, rng),
                  std::domain_error);
  CHECK_THROWS_AS(sample_matrix<cplx>(find_ensemble("real-gaussian"), 4, 4, rng),
                  std::domain_error);
}
