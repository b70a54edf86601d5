#pragma once

#include <complex>
#include <string>
#include <vector>

#include "fracsol/special_functions.hpp"

namespace fracsol {

// One closed-form atom: coeff * t^(k*alpha) * E_alpha(a * t^alpha).
// k = 0, a = 0 is a constant; k = 0, a != 0 a pure Mittag-Leffler mode;
// k >= 1 the polynomial-dressed modes that appear at repeated roots.
struct FracTerm {
    std::complex<double> coeff;
    int k = 0;
    std::complex<double> a;
};

// A finite sum of atoms sharing one order alpha.
struct TermSum {
    double alpha = 1.0;
    std::vector<FracTerm> terms;
};

// Two rates closer than this (relative) are treated as the same mode.
constexpr double kRateMergeTol = 1e-9;
// Coefficients this small (relative to the largest in the sum) are dropped.
constexpr double kCoeffDropTol = 1e-12;

// Merge like atoms, drop negligible ones, sort by (k, Re a, Im a).
TermSum normalize(const TermSum& s);

TermSum add(const TermSum& x, const TermSum& y);
TermSum scale(const TermSum& s, std::complex<double> c);

// Order-alpha derivative of the sum, term by term:
//   D^a [t^(k a) E_a(r t^a)] = r t^(k a) E_a(r t^a)
//                            + G(1+k a)/G(1+(k-1) a) t^((k-1) a) E_a(r t^a)
// (the second line only for k >= 1).  Exact for pure powers (r = 0) and
// pure modes (k = 0); for mixed atoms it is the formal product-rule
// extension that the solver's term calculus is built on.
TermSum d_alpha(const TermSum& s);
TermSum d_alpha_n(const TermSum& s, int n);

// Order-alpha antiderivative (zero at t = 0), the exact inverse of d_alpha
// on this atom family.
TermSum integrate_alpha(const TermSum& s);

std::complex<double> evaluate(const TermSum& s, double t, const MLConfig& cfg = {});

// Real-form view: coeff * t^(k a) * E_a(p t^a) * {1 | cos_a(q t^a) | sin_a(q t^a)}
// where cos_a/sin_a are the real and imaginary parts of E_a(i q t^a).
struct RealAtom {
    double coeff = 0.0;
    int k = 0;
    double p = 0.0;
    enum class Trig { none, cos, sin } trig = Trig::none;
    double q = 0.0;
};

struct RealRendering {
    double alpha = 1.0;
    std::vector<RealAtom> atoms;
};

// Pair conjugate modes into cos/sin atoms.  Throws SolverError if the sum
// is not (numerically) real-valued, i.e. some complex mode has no partner.
// For a purely imaginary rate pair (p = 0) the cos/sin form is exactly the
// atom sum; for p != 0 it is the conventional factored display form, which
// as a function of t agrees with the atom sum only at alpha = 1 because
// E_a(x) E_a(y) differs from E_a(x + y) at fractional orders.
RealRendering to_real(const TermSum& s, double tol = 1e-9);

double evaluate_real(const RealRendering& r, double t, const MLConfig& cfg = {});

// Human-readable closed form, e.g. "0.5*t^(2a)*E_a(-1.5*t^a)*cos_a(2*t^a)".
std::string render_text(const RealRendering& r);

}  // namespace fracsol
