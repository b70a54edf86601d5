#pragma once

#include <vector>

#include "fracsol/numeric_oracle.hpp"
#include "fracsol/operator_algebra.hpp"
#include "fracsol/term_algebra.hpp"

namespace fracsol {

// f(D^alpha) y = g, with g a term sum sharing the operator's alpha.
struct Problem {
    OperatorPoly op;
    TermSum forcing;
};

struct Solution {
    double alpha = 1.0;
    RootSet roots;
    // Homogeneous basis elements; a free constant multiplies each.
    std::vector<TermSum> complementary;
    TermSum particular;
};

// For each characteristic root r of multiplicity m the basis contributes
// t^(ka) E_a(r t^a), k = 0..m-1.  Each element is annihilated exactly by the
// operator in the term calculus.
std::vector<TermSum> complementary_basis(const OperatorPoly& op, const RootSet& roots);

// Particular solution for one forcing atom C t^(ma) E_a(c t^a):
//   1. k = multiplicity of c as a characteristic root (0 when not a root),
//   2. divide the operator by (X - c)^k,
//   3. re-center the remaining polynomial at c,
//   4. invert it as a power series to order m,
//   5. apply the series (in D^a) to t^(ma) by the power rule,
//   6. integrate k times,
//   7. scale by C and restore the E_a(c t^a) factor.
TermSum particular_atom(const OperatorPoly& op, const RootSet& roots, const FracTerm& atom);

TermSum particular(const OperatorPoly& op, const RootSet& roots, const TermSum& g);

// Roots + basis + particular, then two internal gates: the operator applied
// to the particular part must reproduce the forcing, and it must annihilate
// every basis element, both to rounding accuracy relative to the data scale.
// Throws SolverError when a gate fails.
Solution solve(const Problem& p);

// Largest pointwise defect of a solution over the grid: the operator applied
// to each basis element must give 0 and applied to the particular part must
// give back the forcing.  Evaluated numerically through the term calculus.
double residual(const Problem& p, const Solution& sol, const std::vector<double>& grid);

// Grid solution of (D^a - a) y = g with y(0) = 0 on g's own grid:
//   y(t) = E_a(a t^a) * I^a[ E_a(-a tau^a) g(tau) ](t),
// the cumulative integral taken by the product-trapezoid rule.  The damping
// step treats E_a as an exponential, which it is only at alpha = 1; at
// fractional orders the result matches the term-calculus solution when
// a = 0 and drifts from it otherwise, so treat it as a cross-check on the
// slices where the exponential law holds.
// self_convergence reports max |y - y_coarse| against the half-resolution
// grid (every second sample); a value above the working tolerance means the
// grid is too coarse to trust.
struct QuadratureResult {
    SampledFunction y;
    double self_convergence = 0.0;
};

QuadratureResult solve_alpha_order_quadrature(double a, const SampledFunction& g,
                                              double alpha);

}  // namespace fracsol
