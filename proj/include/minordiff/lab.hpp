#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <optional>
#include <stdexcept>
#include <vector>

#include "minordiff/almost_analytic.hpp"
#include "minordiff/common.hpp"
#include "minordiff/ensembles.hpp"
#include "minordiff/quadrature.hpp"
#include "minordiff/spectral.hpp"
#include "minordiff/test_function.hpp"

namespace minordiff {

template <class Scalar>
using Mat = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
template <class Scalar>
using Vec = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

/// A drawn M x N matrix together with its first column x and the minor
/// X (columns 2..N). The statistic compares X~* X~ (N x N) with
/// X* X (N-1 x N-1).
template <class Scalar>
struct SamplePair {
  Mat<Scalar> xtilde;
  Mat<Scalar> x_minor;
  Vec<Scalar> first_col;
  int m = 0, n = 0;
};

template <class Scalar>
SamplePair<Scalar> make_sample_pair(Mat<Scalar> xtilde) {
  SamplePair<Scalar> sp;
  sp.m = int(xtilde.rows());
  sp.n = int(xtilde.cols());
  sp.first_col = xtilde.col(0);
  sp.x_minor = xtilde.rightCols(sp.n - 1);
  sp.xtilde = std::move(xtilde);
  return sp;
}

template <class Scalar>
SamplePair<Scalar> draw_sample_pair(const EnsembleSpec& spec, int m, int n, Philox& rng) {
  return make_sample_pair(sample_matrix<Scalar>(spec, m, n, rng));
}

/// Ascending eigenvalues of the Gram matrix and its minor.
struct SpectrumPair {
  Eigen::VectorXd lam_tilde;  // N values
  Eigen::VectorXd lam;        // N-1 values
};

struct EigensolverFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

namespace detail {

template <class Scalar>
Eigen::VectorXd gram_eigenvalues(const Mat<Scalar>& x) {
  if (x.cols() == 0) return Eigen::VectorXd(0);
  Mat<Scalar> w = x.adjoint() * x;
  Eigen::SelfAdjointEigenSolver<Mat<Scalar>> es(w, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) throw EigensolverFailure("gram eigensolve did not converge");
  return es.eigenvalues();
}

}  // namespace detail

template <class Scalar>
SpectrumPair spectra(const SamplePair<Scalar>& sp) {
  return {detail::gram_eigenvalues(sp.xtilde), detail::gram_eigenvalues(sp.x_minor)};
}

/// Largest violation of the interlacing lam_tilde[k] <= lam[k] <= lam_tilde[k+1].
inline double interlacing_violation(const SpectrumPair& s) {
  double worst = 0.0;
  for (int k = 0; k < s.lam.size(); ++k) {
    worst = std::max(worst, s.lam_tilde[k] - s.lam[k]);
    worst = std::max(worst, s.lam[k] - s.lam_tilde[k + 1]);
  }
  return worst;
}

/// | (sum lam_tilde - sum lam) - |x|^2 |, zero in exact arithmetic.
template <class Scalar>
double trace_identity_residual(const SamplePair<Scalar>& sp, const SpectrumPair& s) {
  return std::abs(s.lam_tilde.sum() - s.lam.sum() - sp.first_col.squaredNorm());
}

/// f_N = sum f(lam_tilde) - sum f(lam).
inline double linear_stat(const TestFunction& f, const SpectrumPair& s) {
  double acc = 0.0;
  for (int i = 0; i < s.lam_tilde.size(); ++i) acc += f.eval(s.lam_tilde[i]);
  for (int i = 0; i < s.lam.size(); ++i) acc -= f.eval(s.lam[i]);
  return acc;
}

/// Resolvent inverse of a rank-one update:
///   (A + h h*)^{-1} = A^{-1} - (A^{-1} h h* A^{-1}) / (1 + <h, A^{-1} h>).
template <class Scalar>
Mat<Scalar> rank_one_inverse_update(const Mat<Scalar>& a_inv, const Vec<Scalar>& h) {
  const Vec<Scalar> ah = a_inv * h;
  const Scalar denom = Scalar(1) + h.dot(ah);
  return a_inv - (ah * (h.adjoint() * a_inv)) / denom;
}

/// Eigendecomposition of the M x M companion Gram matrix X X* of the
/// minor, with the first-column weights |u_k^* x|^2 precomputed. All
/// resolvent quantities of the minor derive from it in O(M) or O(M^2)
/// per spectral point.
template <class Scalar>
struct GramEigen {
  Eigen::VectorXd evals;          // M eigenvalues of X X*
  Mat<Scalar> evecs;              // kept only when entrywise data is required
  Eigen::VectorXd first_col_w;    // |u_k^* x|^2
  double first_col_norm2 = 0.0;   // |x|^2
  int m = 0;
  int n = 0;  // columns of X~ (minor has n-1)
};

template <class Scalar>
GramEigen<Scalar> make_gram_eigen(const SamplePair<Scalar>& sp, bool keep_vectors = false) {
  Mat<Scalar> b = sp.x_minor * sp.x_minor.adjoint();
  Eigen::SelfAdjointEigenSolver<Mat<Scalar>> es(b);
  if (es.info() != Eigen::Success) throw EigensolverFailure("companion eigensolve did not converge");
  GramEigen<Scalar> ge;
  ge.evals = es.eigenvalues();
  ge.m = sp.m;
  ge.n = sp.n;
  const Vec<Scalar> coeff = es.eigenvectors().adjoint() * sp.first_col;
  ge.first_col_w = coeff.cwiseAbs2();
  ge.first_col_norm2 = sp.first_col.squaredNorm();
  if (keep_vectors) ge.evecs = es.eigenvectors();
  return ge;
}

/// <x, G(z) x> and <x, G(z)^2 x> as bilinear forms in the eigenbasis.
template <class Scalar>
cplx quadratic_form_g(const GramEigen<Scalar>& ge, cplx z) {
  cplx acc = 0.0;
  for (int k = 0; k < ge.evals.size(); ++k) acc += ge.first_col_w[k] / (ge.evals[k] - z);
  return acc;
}

template <class Scalar>
cplx quadratic_form_g2(const GramEigen<Scalar>& ge, cplx z) {
  cplx acc = 0.0;
  for (int k = 0; k < ge.evals.size(); ++k) {
    const cplx d = ge.evals[k] - z;
    acc += ge.first_col_w[k] / (d * d);
  }
  return acc;
}

/// Delta_N(z) = Tr R~(z) - Tr R(z) from the two spectra directly.
inline cplx delta_n_direct(const SpectrumPair& s, cplx z) {
  require(z.imag() > 0.0, "delta_n requires Im z > 0");
  cplx acc = 0.0;
  for (int i = 0; i < s.lam_tilde.size(); ++i) acc += 1.0 / (s.lam_tilde[i] - z);
  for (int i = 0; i < s.lam.size(); ++i) acc -= 1.0 / (s.lam[i] - z);
  return acc;
}

/// The same quantity through the rank-one identity on the companion
/// side: Delta_N(z) = -<x, G^2 x> / (1 + <x, G x>) - 1/z.
template <class Scalar>
cplx delta_n_rank1(const GramEigen<Scalar>& ge, cplx z) {
  require(z.imag() > 0.0, "delta_n requires Im z > 0");
  return -quadratic_form_g2(ge, z) / (1.0 + quadratic_form_g(ge, z)) - 1.0 / z;
}

/// Entrywise and averaged local-law residuals plus the per-draw
/// algebraic identities (Ward, trace swap). R is the resolvent of the
/// minor X*X, G of the companion X X*.
struct LocalLawRecord {
  double avg_r = 0.0;      // |m_R - m_phi| * N eta,   m_R = Tr R / N
  double avg_g = 0.0;      // |m_G - m_{1/phi}| * N eta, m_G = Tr G / M
  double entry_r = 0.0;    // max |R_uv - delta m_phi| * sqrt(N eta |z|)
  double entry_g = 0.0;    // max |G_ij - delta m_{1/phi}| * sqrt(N eta |z|)
  double ward_row = 0.0;   // |sum_j |G_0j|^2 - Im G_00 / eta|
  double ward_frob = 0.0;  // ||G||_F^2 - Im Tr G / eta|
  double trace_swap = 0.0; // |phi Tr G~ / M - Tr R~ / N - (1-phi)/z|
};

template <class Scalar>
struct MinorEigen {
  Eigen::VectorXd evals;  // N-1 eigenvalues of X*X
  Mat<Scalar> evecs;
};

template <class Scalar>
MinorEigen<Scalar> make_minor_eigen(const SamplePair<Scalar>& sp) {
  Mat<Scalar> w = sp.x_minor.adjoint() * sp.x_minor;
  Eigen::SelfAdjointEigenSolver<Mat<Scalar>> es(w);
  if (es.info() != Eigen::Success) throw EigensolverFailure("minor eigensolve did not converge");
  return {es.eigenvalues(), es.eigenvectors()};
}

namespace detail {

template <class Scalar>
Mat<cplx> resolvent_from_eigen(const Eigen::VectorXd& d, const Mat<Scalar>& u, cplx z) {
  const Eigen::VectorXcd inv = (d.template cast<cplx>().array() - z).inverse().matrix();
  Mat<cplx> uc = u.template cast<cplx>();
  return uc * inv.asDiagonal() * uc.adjoint();
}

}  // namespace detail

template <class Scalar>
LocalLawRecord local_law_residuals(const SamplePair<Scalar>& sp, const SpectrumPair& s,
                                   const MinorEigen<Scalar>& me, const GramEigen<Scalar>& ge,
                                   cplx z, double phi) {
  require(z.imag() > 0.0, "local law residuals require Im z > 0");
  const double eta = z.imag();
  const int n = sp.n, m = sp.m;
  const cplx mphi = stieltjes_m(z, phi);
  const cplx mswap = stieltjes_m_swap(z, phi);

  LocalLawRecord rec;
  const cplx tr_r = (me.evals.template cast<cplx>().array() - z).inverse().sum();
  rec.avg_r = std::abs(tr_r / double(n) - mphi) * n * eta;
  const cplx tr_g = (ge.evals.template cast<cplx>().array() - z).inverse().sum();
  rec.avg_g = std::abs(tr_g / double(m) - mswap) * n * eta;

  const double entry_scale = std::sqrt(n * eta * std::abs(z));
  const Mat<cplx> r_full = detail::resolvent_from_eigen(me.evals, me.evecs, z);
  double worst = 0.0;
  for (int a = 0; a < r_full.rows(); ++a)
    for (int b = 0; b < r_full.cols(); ++b)
      worst = std::max(worst, std::abs(r_full(a, b) - (a == b ? mphi : cplx(0.0))));
  rec.entry_r = worst * entry_scale;

  const Mat<cplx> g_full = detail::resolvent_from_eigen(ge.evals, ge.evecs, z);
  worst = 0.0;
  for (int a = 0; a < g_full.rows(); ++a)
    for (int b = 0; b < g_full.cols(); ++b)
      worst = std::max(worst, std::abs(g_full(a, b) - (a == b ? mswap : cplx(0.0))));
  rec.entry_g = worst * entry_scale;

  rec.ward_row = std::abs(g_full.row(0).squaredNorm() - g_full(0, 0).imag() / eta);
  rec.ward_frob = std::abs(g_full.squaredNorm() - tr_g.imag() / eta);

  // Tr G~ via the rank-one update of the companion resolvent; Tr R~ from
  // the full spectrum. Exercises two independent paths of the identity.
  const cplx tr_g_tilde =
      tr_g - quadratic_form_g2(ge, z) / (1.0 + quadratic_form_g(ge, z));
  cplx tr_r_tilde = 0.0;
  for (int i = 0; i < s.lam_tilde.size(); ++i) tr_r_tilde += 1.0 / (s.lam_tilde[i] - z);
  rec.trace_swap =
      std::abs(phi * tr_g_tilde / double(m) - tr_r_tilde / double(n) - cplx(1.0 - phi) / z);
  return rec;
}

/// Empirical two-resolvent sums of the companion resolvents at (z, z')
/// against their deterministic limits. The tracial sum converges to
///   w w' m2 m2' / (1 - w w')
/// and the non-tracial sum to its |sigma2|^2-damped analogue.
struct TwoResolventRecord {
  cplx sum_tracial;
  cplx sum_nontracial;
  cplx limit_tracial;
  cplx limit_nontracial;
  cplx pair_empirical;  // conditional second moment of the first-column form
  cplx pair_limit;
  double resid_tracial = 0.0;
  double resid_nontracial = 0.0;
};

template <class Scalar>
TwoResolventRecord two_resolvent_stats(const GramEigen<Scalar>& ge, cplx z, cplx zp, double phi,
                                       cplx sigma2, double sigma4) {
  require(z.imag() > 0.0 && zp.imag() > 0.0, "two_resolvent_stats requires Im z, Im z' > 0");
  require(ge.evecs.size() > 0, "two_resolvent_stats needs eigenvectors (keep_vectors)");
  const int m = ge.m;
  const int n = ge.n;
  const double s2 = std::norm(sigma2);

  const Eigen::VectorXcd vz = (ge.evals.template cast<cplx>().array() - z).inverse();
  const Eigen::VectorXcd vzp = (ge.evals.template cast<cplx>().array() - zp).inverse();

  // Tr(G G') in the shared eigenbasis
  const cplx trace_gg = (vz.array() * vzp.array()).sum();

  // S = U^T U: for real matrices this is the identity and the two sums
  // coincide; Q_ik = |U_ik|^2 gives the resolvent diagonals.
  const Mat<Scalar> s_mat = ge.evecs.transpose() * ge.evecs;
  const Eigen::MatrixXd s_abs2 = s_mat.cwiseAbs2();
  const Eigen::MatrixXd q = ge.evecs.cwiseAbs2();

  auto real_times_cvec = [](const Eigen::MatrixXd& a, const Eigen::VectorXcd& v) {
    Eigen::VectorXd re = a * v.real().matrix();
    Eigen::VectorXd im = a * v.imag().matrix();
    Eigen::VectorXcd out(re.size());
    out.real() = re;
    out.imag() = im;
    return out;
  };

  const Eigen::VectorXcd diag_z = real_times_cvec(q, vz);
  const Eigen::VectorXcd diag_zp = real_times_cvec(q, vzp);
  const cplx diag_prod = (diag_z.array() * diag_zp.array()).sum();

  // sum_{kl} |S_kl|^2 / ((d_k - z)(d_l - z'))
  const Eigen::VectorXcd s_vzp = real_times_cvec(s_abs2, vzp);
  const cplx sum_gg_t = (vz.array() * s_vzp.array()).sum();

  TwoResolventRecord rec;
  const double norm = phi * double(n);
  rec.sum_tracial = (trace_gg - diag_prod) / norm;
  rec.sum_nontracial = (sum_gg_t - diag_prod) / norm;

  const cplx w = w_semicircle(z, phi), wp = w_semicircle(zp, phi);
  const cplx m2 = stieltjes_m_swap(z, phi), m2p = stieltjes_m_swap(zp, phi);
  rec.limit_tracial = w * wp * m2 * m2p / (1.0 - w * wp);
  rec.limit_nontracial = s2 * w * wp * m2 * m2p / (1.0 - s2 * w * wp);

  rec.pair_empirical = rec.sum_tracial + s2 * rec.sum_nontracial +
                       (sigma4 - 1.0) * diag_prod / double(m);
  rec.pair_limit = rec.limit_tracial + s2 * rec.limit_nontracial + (sigma4 - 1.0) * m2 * m2p;

  rec.resid_tracial = std::abs(rec.sum_tracial - rec.limit_tracial);
  rec.resid_nontracial = std::abs(rec.sum_nontracial - rec.limit_nontracial);
  return rec;
}

/// Contour reconstruction of f_N:
///   f_N = (2/pi) Re II_{eta > eta0} dbar f_C(x + i eta) Delta_N(x + i eta) dx deta
/// with Delta_N through the rank-one route. The integration is layered:
/// dyadic bands in eta, composite Gauss-Legendre panels in x whose width
/// tracks the distance to the real axis.
struct HsResult {
  double value = 0.0;
  double truncation_estimate = 0.0;  // O(eta0) tail below the cut
};

struct HsOptions {
  double x_panel_cap = 0.05;  // widest x panel, resolves the test function
  double eta_factor = 0.5;    // x panel width <= eta_factor * eta
};

template <class Scalar>
HsResult hs_reconstruct(const AlmostAnalytic& af, const GramEigen<Scalar>& ge, double eta0,
                        const HsOptions& opt = {}) {
  require(eta0 > 0.0 && eta0 <= 1e-2, "eta0 must lie in (0, 1e-2]");
  const double a = af.domain_lo(), b = af.domain_hi();
  double total = 0.0;
  double lo = eta0;
  while (lo < 10.0) {
    const double hi = std::min(2.0 * lo, 10.0);
    const double width = std::min(opt.eta_factor * lo, opt.x_panel_cap);
    const int npan = int(std::ceil((b - a) / width));
    for (int ke = 0; ke < 8; ++ke) {
      const double eta = 0.5 * (hi + lo) + 0.5 * (hi - lo) * GaussLegendre8::nodes[ke];
      const double weta = 0.5 * (hi - lo) * GaussLegendre8::weights[ke];
      double strip = 0.0;
      const double h = (b - a) / npan;
      for (int p = 0; p < npan; ++p) {
        const double mid = a + (p + 0.5) * h;
        for (int kx = 0; kx < 8; ++kx) {
          const double x = mid + 0.5 * h * GaussLegendre8::nodes[kx];
          const cplx z(x, eta);
          strip += GaussLegendre8::weights[kx] *
                   (af.dbar_f_c(z) * delta_n_rank1(ge, z)).real();
        }
      }
      total += weta * 0.5 * h * strip;
    }
    lo = hi;
  }
  // |dbar f_C| <= eta |f_chi''| / 2 and |Delta_N| <= 2 / eta below the cut
  double l1 = 0.0;
  const int nl1 = 2000;
  for (int i = 0; i < nl1; ++i)
    l1 += std::abs(af.f_chi_dd(a + (b - a) * (i + 0.5) / nl1));
  l1 *= (b - a) / nl1;
  return {2.0 / kPi * total, 2.0 / kPi * eta0 * l1};
}

}  // namespace minordiff
