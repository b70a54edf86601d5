#!/usr/bin/env python3
"""Regenerate the high-precision reference tables used by the test suite.

Writes tests/support/reference_values.hpp.  Also prints the double-double
Taylor coefficients of 1/Gamma(1+x) that are frozen into
src/special_functions.cpp (they only need regenerating if the term count
changes).

Requires mpmath.  Values are evaluated at the exact binary64 value of each
abscissa so the table can be compared against double-precision code without
representation error.
"""

import mpmath as mp

mp.mp.dps = 80

GAMMA_XS = [
    0.001, 0.002, 0.005, 0.01, 0.02, 0.05, 0.1, 0.2,
    1.0 / 3.0, 0.4, 0.5, 0.6, 2.0 / 3.0, 0.75, 0.8, 0.9,
    1.0, 1.1, 1.2, 1.3, 4.0 / 3.0, 1.4, 1.5, 1.6,
    5.0 / 3.0, 1.75, 1.8, 1.9, 2.0, 2.2, 7.0 / 3.0, 2.5,
    8.0 / 3.0, 3.0, 3.5, 4.0, 5.0, 6.5, 8.0, 10.0,
    12.5, 15.0, 20.0, 30.0, 50.0, 75.0, 100.0, 125.0,
    150.0, 170.0,
]

# alpha, z (as python complex); evaluated at the binary64 images of both.
ML_POINTS = [
    (0.5, 1.0 + 0.0j),
    (0.5, -1.0 + 0.0j),
    (0.5, -4.0 + 0.0j),
    (0.5, 0.0 + 1.0j),
    (1.0 / 3.0, 2.0 + 0.0j),
    (0.3, 1.7 + 0.0j),
    (0.7, -2.5 + 0.0j),
    (0.8, 3.2 + 0.0j),
    (0.9, 2.0 + 1.5j),
    (1.0, 2.0 + 0.0j),
    (1.0, -20.0 + 0.0j),
]


def ml(alpha, z):
    """Mittag-Leffler E_alpha(z) by direct series in high precision."""
    alpha = mp.mpf(alpha)
    z = mp.mpc(z)
    s = mp.mpc(0)
    small = 0
    for k in range(0, 20000):
        t = z ** k / mp.gamma(1 + alpha * k)
        s += t
        small = small + 1 if abs(t) < mp.mpf(10) ** (-(mp.mp.dps + 10)) else 0
        if small >= 8 and k > 4:
            return s
    raise RuntimeError("series did not converge")


def fmt(v, digits=25):
    return mp.nstr(mp.mpf(v), digits, strip_zeros=False)


def main():
    lines = []
    lines.append("// Generated by tools/gen_reference_tables.py (mpmath, 80 significant digits).")
    lines.append("// Abscissae are exact binary64 values; do not edit by hand.")
    lines.append("#pragma once")
    lines.append("")
    lines.append("#include <complex>")
    lines.append("")
    lines.append("namespace fracsol_test_ref {")
    lines.append("")
    lines.append("struct GammaRef { double x; double value; };")
    lines.append("")
    lines.append(f"inline constexpr GammaRef kGammaTable[{len(GAMMA_XS)}] = {{")
    for x in GAMMA_XS:
        gx = mp.gamma(mp.mpf(x))
        lines.append(f"    {{{x!r}, {fmt(gx)}}},")
    lines.append("};")
    lines.append("")

    named = {
        "kGamma_2_3": 2.0 / 3.0,
        "kGamma_4_3": 4.0 / 3.0,
        "kGamma_5_3": 5.0 / 3.0,
        "kGamma_7_3": 7.0 / 3.0,
        "kGamma_8_3": 8.0 / 3.0,
        "kGamma_1_4": 1.4,
        "kGamma_1_5": 1.5,
        "kGamma_1_6": 1.6,
        "kGamma_1_8": 1.8,
        "kGamma_2_2": 2.2,
        "kGamma_3_0": 3.0,
    }
    for name, x in named.items():
        lines.append(f"inline constexpr double {name} = {fmt(mp.gamma(mp.mpf(x)))};  // Gamma({x!r})")
    lines.append("")

    lines.append("struct MLRef { double alpha; double z_re; double z_im; double re; double im; };")
    lines.append("")
    lines.append(f"inline constexpr MLRef kMittagLefflerTable[{len(ML_POINTS)}] = {{")
    for alpha, z in ML_POINTS:
        v = ml(alpha, mp.mpc(z.real, z.imag))
        lines.append(
            f"    {{{alpha!r}, {z.real!r}, {z.imag!r}, {fmt(v.real)}, {fmt(v.imag)}}},"
        )
    lines.append("};")
    lines.append("")

    # Cross-check of E_{1/2}(z) = exp(z^2) erfc(-z) for the frozen z=1 value.
    z = mp.mpf(1)
    lhs = ml(0.5, z)
    rhs = mp.exp(z * z) * mp.erfc(-z)
    assert abs(lhs - rhs) < mp.mpf(10) ** (-60), (lhs, rhs)
    lines.append(f"inline constexpr double kML_half_at_1 = {fmt(lhs.real)};  // E_0.5(1) = e*erfc(-1)")
    lines.append("")
    lines.append("}  // namespace fracsol_test_ref")
    lines.append("")

    with open("tests/support/reference_values.hpp", "w") as f:
        f.write("\n".join(lines))
    print("wrote tests/support/reference_values.hpp")

    # Double-double Taylor coefficients of 1/Gamma(1+x) on x in [0,1],
    # frozen into src/special_functions.cpp.
    n = 42
    coeffs = mp.taylor(lambda t: 1 / mp.gamma(1 + t), 0, n)
    print("// Taylor coefficients of 1/Gamma(1+x), double-double {hi, lo} pairs:")
    for c in coeffs:
        hi = float(c)
        lo = float(c - mp.mpf(hi))
        print(f"    {{{hi!r}, {lo!r}}},")


if __name__ == "__main__":
    main()
