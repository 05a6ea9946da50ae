#pragma once

#include <Eigen/Core>
#include <cmath>
#include <complex>
#include <functional>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "minordiff/common.hpp"
#include "minordiff/rng.hpp"

namespace minordiff {

enum class Field { Real, Complex };

/// Entry distribution for the data matrix. The sampler draws a
/// normalized entry u with E u = 0 and E|u|^2 = 1; sample_matrix applies
/// the (MN)^{-1/4} scale. The moment metadata is declared analytically:
///   sigma2 = E u^2,  sigma4 = E|u|^4.
struct EnsembleSpec {
  std::string label;
  Field field = Field::Real;
  cplx sigma2{1.0, 0.0};
  double sigma4 = 3.0;
  std::function<double(Philox&)> draw_real;
  std::function<cplx(Philox&)> draw_complex;
};

inline EnsembleSpec make_ensemble(std::string label, Field field, cplx sigma2, double sigma4,
                                  std::function<double(Philox&)> dr,
                                  std::function<cplx(Philox&)> dc) {
  if (std::abs(sigma2) > 1.0 + 1e-12)
    throw std::logic_error("ensemble " + label + ": |sigma2| must be <= 1");
  if (sigma4 < std::max(1.0, std::norm(sigma2)) - 1e-12)
    throw std::logic_error("ensemble " + label + ": sigma4 must be >= max(1, |sigma2|^2)");
  return {std::move(label), field, sigma2, sigma4, std::move(dr), std::move(dc)};
}

inline const std::vector<EnsembleSpec>& builtin_ensembles() {
  static const std::vector<EnsembleSpec> v = [] {
    const double sqrt3 = std::sqrt(3.0);
    std::vector<EnsembleSpec> e;
    e.push_back(make_ensemble(
        "real-gaussian", Field::Real, 1.0, 3.0, [](Philox& r) { return r.normal(); }, nullptr));
    e.push_back(make_ensemble(
        "complex-gaussian", Field::Complex, 0.0, 2.0, nullptr,
        [](Philox& r) { return r.complex_normal(); }));
    // unit phase: |u| = 1 exactly, so the column norms are deterministic
    e.push_back(make_ensemble(
        "complex-bernoulli", Field::Complex, 0.0, 1.0, nullptr, [](Philox& r) {
          const double a = 2.0 * kPi * r.uniform01();
          return cplx(std::cos(a), std::sin(a));
        }));
    e.push_back(make_ensemble(
        "rademacher", Field::Real, 1.0, 1.0,
        [](Philox& r) { return r.uniform01() < 0.5 ? -1.0 : 1.0; }, nullptr));
    e.push_back(make_ensemble(
        "uniform", Field::Real, 1.0, 9.0 / 5.0,
        [sqrt3](Philox& r) { return sqrt3 * (2.0 * r.uniform01() - 1.0); }, nullptr));
    return e;
  }();
  return v;
}

/// Parametric families for config-defined ensembles. Supported:
///   gaussian(field), phase, rademacher, uniform,
///   two-point(p): real u = a w.p. p, b w.p. 1-p with mean 0, variance 1
///                 (a = sqrt((1-p)/p), b = -sqrt(p/(1-p)); sigma4 tunable).
inline EnsembleSpec make_family_ensemble(const std::string& family,
                                         const std::map<std::string, double>& params) {
  auto get = [&](const std::string& key, double dflt) {
    auto it = params.find(key);
    return it == params.end() ? dflt : it->second;
  };
  if (family == "gaussian") {
    const bool complex_field = get("complex", 0.0) != 0.0;
    for (const auto& e : builtin_ensembles())
      if (e.label == (complex_field ? "complex-gaussian" : "real-gaussian")) return e;
  }
  if (family == "phase")
    for (const auto& e : builtin_ensembles())
      if (e.label == "complex-bernoulli") return e;
  if (family == "rademacher" || family == "uniform")
    for (const auto& e : builtin_ensembles())
      if (e.label == family) return e;
  if (family == "two-point") {
    const double p = get("p", 0.5);
    if (!(p > 0.0 && p < 1.0)) throw std::invalid_argument("two-point: need 0 < p < 1");
    const double a = std::sqrt((1.0 - p) / p);
    const double b = -std::sqrt(p / (1.0 - p));
    const double sigma4 = p * a * a * a * a + (1.0 - p) * b * b * b * b;
    return make_ensemble(
        "two-point(p=" + std::to_string(p) + ")", Field::Real, 1.0, sigma4,
        [p, a, b](Philox& r) { return r.uniform01() < p ? a : b; }, nullptr);
  }
  throw std::invalid_argument("unknown ensemble family: " + family);
}

inline const EnsembleSpec& find_ensemble(const std::string& label) {
  for (const auto& e : builtin_ensembles())
    if (e.label == label) return e;
  throw std::invalid_argument("unknown ensemble: " + label);
}

namespace detail {

template <class Scalar>
Scalar draw_entry(const EnsembleSpec&, Philox&);

template <>
inline double draw_entry<double>(const EnsembleSpec& spec, Philox& rng) {
  return spec.draw_real(rng);
}

template <>
inline cplx draw_entry<cplx>(const EnsembleSpec& spec, Philox& rng) {
  return spec.draw_complex(rng);
}

}  // namespace detail

/// Draws an M x N matrix with i.i.d. entries of variance (MN)^{-1/2},
/// reproducible for a given rng state. Column-major fill order is part
/// of the determinism contract.
template <class Scalar>
Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> sample_matrix(const EnsembleSpec& spec,
                                                                    int m, int n, Philox& rng) {
  require(m >= 1 && n >= 1, "matrix dimensions must be positive");
  if constexpr (std::is_same_v<Scalar, double>)
    require(spec.field == Field::Real, "real sampler requested for a complex ensemble");
  else
    require(spec.field == Field::Complex, "complex sampler requested for a real ensemble");
  const double scale = std::pow(double(m) * double(n), -0.25);
  Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> x(m, n);
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < m; ++i) x(i, j) = scale * detail::draw_entry<Scalar>(spec, rng);
  return x;
}

template <class Scalar>
Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> sample_matrix(const EnsembleSpec& spec,
                                                                    int m, int n,
                                                                    std::uint64_t seed,
                                                                    std::uint64_t stream) {
  Philox rng(seed, stream);
  return sample_matrix<Scalar>(spec, m, n, rng);
}

}  // namespace minordiff
