#pragma once

#include <complex>
#include <stdexcept>
#include <string>

namespace minordiff {

using cplx = std::complex<double>;

constexpr double kPi = 3.14159265358979323846;

/// Thrown when an aspect ratio falls outside the supported regimes
/// (exactly square, or rectangular with |phi - 1| >= d_star).
class RegimeError : public std::domain_error {
 public:
  explicit RegimeError(const std::string& what) : std::domain_error(what) {}
};

inline void require(bool cond, const std::string& msg) {
  if (!cond) throw std::domain_error(msg);
}

inline double sqr(double x) { return x * x; }

}  // namespace minordiff
