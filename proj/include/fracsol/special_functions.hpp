#pragma once

#include <complex>

namespace fracsol {

// Controls the Mittag-Leffler series evaluation.
struct MLConfig {
    double eps = 1e-15;   // relative stop threshold on trailing terms
    int k_max = 2000;     // series term cap before giving up
    double z_max = 50.0;  // largest |z| accepted
};

struct MLValue {
    std::complex<double> value;
    double error_estimate;  // magnitude of the last summed term
};

// Gamma for positive real x.  Lanczos rational core, validated against a
// committed high-precision table.  Throws std::domain_error for x <= 0 and
// std::overflow_error once Gamma(x) leaves double range (x > ~171.62).
double gamma(double x);

// log(Gamma(x)) for x > 0, usable far beyond the overflow point of gamma().
double log_gamma(double x);

// Gamma(x)/Gamma(y) for positive x, y; stable when both are large.
double gamma_ratio(double x, double y);

// One-parameter Mittag-Leffler function E_alpha(z) = sum_k z^k / Gamma(1+alpha*k)
// for alpha in (0, 1].  Power series with compensated summation; the sum is
// re-run in double-double arithmetic when cancellation would destroy double
// accuracy (large negative or imaginary z).  Stops once the last three term
// magnitudes each fall below eps*|partial sum|.
// Throws std::domain_error (alpha out of range, |z| > z_max) and
// SolverError (k_max reached, or terms overflow double range).
MLValue mittag_leffler(double alpha, std::complex<double> z, const MLConfig& cfg = {});

// Fractional cosine / sine: real and imaginary parts of E_alpha(i*b*t^alpha).
// Require t >= 0.
double frac_cos(double alpha, double b, double t, const MLConfig& cfg = {});
double frac_sin(double alpha, double b, double t, const MLConfig& cfg = {});

}  // namespace fracsol
