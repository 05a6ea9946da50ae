#!/usr/bin/env python3
"""One-shot generator for tests/oracle_constants.hpp.

Reference values for the predictor integrals, computed along a route
independent of the library's quadrature: tanh-sinh integration of the
raw integrands (endpoint singularities and all) at 50 decimal digits
via mpmath. Run from the repository root:

    python3 tools/oracle_constants.py > tests/oracle_constants.hpp
"""

import mpmath as mp

mp.mp.dps = 50

FUNS = {
    "sq": (lambda x: x * x, lambda x: 2 * x),
    "exp_neg": (lambda x: mp.e**-x, lambda x: -(mp.e**-x)),
    "cos": (lambda x: mp.cos(x), lambda x: -mp.sin(x)),
    "bump": (
        lambda x: mp.e ** (-1 / (1 - (x - 2) ** 2)) if abs(x - 2) < 1 else mp.mpf(0),
        lambda x: mp.e ** (-1 / (1 - (x - 2) ** 2)) * (-2 * (x - 2)) / (1 - (x - 2) ** 2) ** 2
        if abs(x - 2) < 1
        else mp.mpf(0),
    ),
}

PHIS = {"phi1": mp.mpf(1), "phi4": mp.mpf(4)}


def gedges(phi):
    s = mp.sqrt(phi)
    return s + 1 / s - 2, s + 1 / s + 2


def omega(f, f0, phi):
    gm, gp = gedges(phi)
    b = mp.sqrt(phi) - 1 / mp.sqrt(phi)

    def integrand(x):
        return f(x) * (1 + b / x) / (2 * mp.pi * mp.sqrt((x - gm) * (gp - x)))

    val = mp.quad(integrand, [gm, (gm + gp) / 2, gp])
    if phi == 1:
        val += f0 / 2
    elif phi < 1:
        val += f0
    return val


def vmoments(fp, phi):
    gm, gp = gedges(phi)

    def w(x):
        return mp.sqrt((x - gm) * (gp - x)) / (2 * mp.pi)

    i1 = mp.quad(lambda x: fp(x) * w(x), [gm, (gm + gp) / 2, gp])
    i2 = mp.quad(lambda x: fp(x) ** 2 * w(x), [gm, (gm + gp) / 2, gp])
    return i2 - i1**2, i1**2


def v_sigma2(fp, phi, s):
    # t_m = (1/pi) Im int f' w(x)^m dx via x = c + 2 cos(a);
    # v = sum_{m>=2} s^{2m-2} t_m^2
    gm, gp = gedges(phi)
    c = (gm + gp) / 2
    total = mp.mpf(0)
    m_ = 2
    small = 0
    while small < 3 and m_ < 600:
        tm = (
            mp.quad(
                lambda a: fp(c + 2 * mp.cos(a)) * mp.sin(m_ * (mp.pi - a)) * 2 * mp.sin(a),
                [0, mp.pi],
            )
            / mp.pi
        )
        term = s ** (2 * m_ - 2) * tm**2
        total += term
        small = small + 1 if term < mp.mpf("1e-40") else 0
        m_ += 1
    return total


def emit(name, value):
    print(f"inline constexpr double {name} = {mp.nstr(value, 17)};")


print("// Generated by tools/oracle_constants.py; do not edit by hand.")
print("// High-precision reference values (tanh-sinh, 50 digits) for the")
print("// predictor integrals, computed independently of the library's")
print("// Chebyshev-substitution quadrature.")
print("#pragma once")
print()
print("namespace oracle {")
print()
for phiname, phi in PHIS.items():
    for fname, (f, fp) in FUNS.items():
        f0 = f(mp.mpf(0))
        emit(f"omega_{fname}_{phiname}", omega(f, f0, phi))
        v1, v2 = vmoments(fp, phi)
        emit(f"v_f1_{fname}_{phiname}", v1)
        emit(f"v_f2_{fname}_{phiname}", v2)
print()
for s_name, s in (("03", mp.mpf("0.3")), ("09", mp.mpf("0.9"))):
    emit(f"v_sigma2_sq_phi1_s{s_name}", v_sigma2(FUNS["sq"][1], mp.mpf(1), s))
    emit(f"v_sigma2_exp_neg_phi1_s{s_name}", v_sigma2(FUNS["exp_neg"][1], mp.mpf(1), s))
print()
print("}  // namespace oracle")
