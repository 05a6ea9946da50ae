// Generated by tools/oracle_constants.py; do not edit by hand.
// High-precision reference values (tanh-sinh, 50 digits) for the
// predictor integrals, computed independently of the library's
// Chebyshev-substitution quadrature.
#pragma once

namespace oracle {

inline constexpr double omega_sq_phi1 = 3.0;
inline constexpr double v_f1_sq_phi1 = 4.0;
inline constexpr double v_f2_sq_phi1 = 16.0;
inline constexpr double omega_exp_neg_phi1 = 0.65425416127683552;
inline constexpr double v_f1_exp_neg_phi1 = 0.043034552857474877;
inline constexpr double v_f2_exp_neg_phi1 = 0.046340866893742787;
inline constexpr double omega_cos_phi1 = 0.45341428026414992;
inline constexpr double v_f1_cos_phi1 = 0.21419735417387264;
inline constexpr double v_f2_cos_phi1 = 0.27501044581032838;
inline constexpr double omega_bump_phi1 = 0.036078563788119637;
inline constexpr double v_f1_bump_phi1 = 0.12262110216172555;
inline constexpr double v_f2_bump_phi1 = 0.0;
inline constexpr double omega_sq_phi4 = 6.0;
inline constexpr double v_f1_sq_phi4 = 4.0;
inline constexpr double v_f2_sq_phi4 = 25.0;
inline constexpr double omega_exp_neg_phi4 = 0.26901206003591;
inline constexpr double v_f1_exp_neg_phi4 = 0.015831527256270754;
inline constexpr double v_f2_exp_neg_phi4 = 0.017047852216270289;
inline constexpr double omega_cos_phi4 = 0.052673370968763209;
inline constexpr double v_f1_cos_phi4 = 0.38555239980022286;
inline constexpr double v_f2_cos_phi4 = 0.11913109889038331;
inline constexpr double omega_bump_phi4 = 0.067292321209504903;
inline constexpr double v_f1_bump_phi4 = 0.11715783492357973;
inline constexpr double v_f2_bump_phi4 = 0.00038684606342625005;

inline constexpr double v_sigma2_sq_phi1_s03 = 0.36;
inline constexpr double v_sigma2_exp_neg_phi1_s03 = 0.0031906482370277311;
inline constexpr double v_sigma2_sq_phi1_s09 = 3.24;
inline constexpr double v_sigma2_exp_neg_phi1_s09 = 0.03348217926810459;

}  // namespace oracle
