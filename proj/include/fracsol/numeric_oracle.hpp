#pragma once

#include <functional>
#include <vector>

namespace fracsol {

struct OracleConfig {
    double h = 1e-4;         // base grid step (adjusted so the grid lands on t)
    bool richardson = true;  // extrapolate the first-order error with h and h/2
    double quad_tol = 1e-2;  // target accuracy for quadrature comparisons
};

struct GLValue {
    double value = 0.0;
    // |D_{h/2} - D_h|, the size of the extrapolated correction; 0 when
    // Richardson is off.
    double error_estimate = 0.0;
};

// Uniform samples values[i] = f(i * h), grid starting at t = 0.
struct SampledFunction {
    double h = 0.0;
    std::vector<double> values;
};

// Grunwald-Letnikov approximation of the order-alpha derivative at t > 0,
// alpha in (0, 1), acting on f - f(0):
//   D^a f(t) ~ h^-a sum_{r=0..n} w_r (f(t - r h) - f(0)),
//   w_0 = 1, w_r = w_{r-1} (r - 1 - alpha) / r.
// This is the independent check oracle: it never looks at the term algebra.
// Throws SolverError when the requested step needs more than ~5e6 terms.
GLValue gl_jumarie_derivative(const std::function<double(double)>& f, double alpha, double t,
                              const OracleConfig& cfg = {});

// Order-alpha integral over [0, t], alpha in (0, 1], by the product-trapezoid
// rule: the data is taken piecewise linear and the kernel (t-tau)^(a-1) is
// integrated exactly against it,
//   I^a f(t) ~ h^a / Gamma(a+2) [ a_{0,n} f_0 + sum_j a_{j,n} f_j + f_n ].
// Reduces to the plain trapezoid rule at alpha = 1.
double frac_integral(const std::function<double(double)>& f, double alpha, double t,
                     double h);

// Same rule applied cumulatively: out.values[i] is the order-alpha integral
// of the sampled data over [0, i*h].
SampledFunction frac_integral(const SampledFunction& f, double alpha);

SampledFunction sample_function(const std::function<double(double)>& f, double t_max,
                                int points);

}  // namespace fracsol
