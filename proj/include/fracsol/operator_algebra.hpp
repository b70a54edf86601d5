#pragma once

#include <complex>
#include <vector>

#include "fracsol/term_algebra.hpp"

namespace fracsol {

// The operator f(D^alpha) = sum_j coeffs[j] * D^(j*alpha).  coeffs[0] is the
// multiplication-by-constant part; the leading coefficient must be nonzero.
struct OperatorPoly {
    double alpha = 1.0;
    std::vector<std::complex<double>> coeffs;
};

struct RootInfo {
    std::complex<double> value;
    int multiplicity = 1;
};

// Roots of the characteristic polynomial, sorted by (Re, Im).
struct RootSet {
    std::vector<RootInfo> roots;
};

// Index of the leading nonzero coefficient.  Throws ValidationError when the
// coefficient list is empty or all zero.
int degree(const OperatorPoly& op);

std::complex<double> eval_poly(const OperatorPoly& op, std::complex<double> s);

// Value of the order-th derivative of the coefficient polynomial at s.
std::complex<double> eval_poly_derivative(const OperatorPoly& op, std::complex<double> s,
                                          int order);

// All characteristic roots with multiplicities (Durand-Kerner iteration,
// cluster detection for repeated roots, Newton polish on the appropriate
// derivative).  Throws SolverError if the iteration fails to converge or a
// polished root leaves a residual above 1e-10 * max|coeff|.
RootSet char_roots(const OperatorPoly& op);

// Divide out (X - root)^multiplicity.  Throws SolverError when any stage
// leaves a remainder above 1e-9 * max|coeff|, i.e. root was not actually a
// root of that multiplicity.
OperatorPoly deflate(const OperatorPoly& op, std::complex<double> root, int multiplicity);

// Coefficients of p(X + c) (Taylor shift by repeated synthetic division).
OperatorPoly shift(const OperatorPoly& op, std::complex<double> c);

// Apply the operator to a term sum: sum_j coeffs[j] * D^(j*alpha) y.
TermSum apply(const OperatorPoly& op, const TermSum& y);

// First m+1 coefficients q of the power-series inverse of s (s[0] != 0),
// i.e. (sum s_i X^i)(sum q_j X^j) = 1 + O(X^(m+1)).
std::vector<std::complex<double>> reciprocal_series(const std::vector<std::complex<double>>& s,
                                                    int m);

}  // namespace fracsol
