#include "fracsol/numeric_oracle.hpp"

#include <cmath>

#include "fracsol/errors.hpp"
#include "fracsol/special_functions.hpp"

namespace fracsol {
namespace {

constexpr long kMaxSumTerms = 5'000'000;

double neumaier(double& s, double& c, double v) {
    double t = s + v;
    if (std::abs(s) >= std::abs(v))
        c += (s - t) + v;
    else
        c += (v - t) + s;
    s = t;
    return s;
}

double gl_sum(const std::function<double(double)>& f, double alpha, double t, long n) {
    double h = t / static_cast<double>(n);
    double f0 = f(0.0);
    double w = 1.0;
    double s = f(t) - f0;  // r = 0 term
    double comp = 0.0;
    for (long r = 1; r <= n; ++r) {
        w *= (static_cast<double>(r) - 1.0 - alpha) / static_cast<double>(r);
        neumaier(s, comp, w * (f(t - static_cast<double>(r) * h) - f0));
    }
    return (s + comp) * std::pow(h, -alpha);
}

}  // namespace

GLValue gl_jumarie_derivative(const std::function<double(double)>& f, double alpha,
                              double t, const OracleConfig& cfg) {
    if (!(alpha > 0.0) || alpha >= 1.0)
        throw std::domain_error("gl_jumarie_derivative: alpha must be in (0, 1)");
    if (!(t > 0.0)) throw std::domain_error("gl_jumarie_derivative: t must be positive");
    if (!(cfg.h > 0.0)) throw ValidationError("gl_jumarie_derivative: step must be positive");
    long n = std::lround(t / cfg.h);
    if (n < 2) n = 2;
    long needed = cfg.richardson ? 2 * n : n;
    if (needed > kMaxSumTerms)
        throw SolverError("gl_jumarie_derivative: step too small, term count exceeds cap");
    double d_h = gl_sum(f, alpha, t, n);
    if (!cfg.richardson) return {d_h, 0.0};
    double d_h2 = gl_sum(f, alpha, t, 2 * n);
    return {2.0 * d_h2 - d_h, std::abs(d_h2 - d_h)};
}

double frac_integral(const std::function<double(double)>& f, double alpha, double t,
                     double h) {
    if (!(alpha > 0.0) || alpha > 1.0)
        throw std::domain_error("frac_integral: alpha must be in (0, 1]");
    if (!(t > 0.0)) throw std::domain_error("frac_integral: t must be positive");
    if (!(h > 0.0)) throw ValidationError("frac_integral: step must be positive");
    long n = std::lround(t / h);
    if (n < 1) n = 1;
    if (n > kMaxSumTerms)
        throw SolverError("frac_integral: step too small, term count exceeds cap");
    double hadj = t / static_cast<double>(n);
    double ap1 = alpha + 1.0;

    // Integer powers k^(alpha+1) are reused across the weight formula.
    std::vector<double> p(n + 2);
    for (long k = 0; k <= n + 1; ++k) p[k] = std::pow(static_cast<double>(k), ap1);

    double nd = static_cast<double>(n);
    double a0 = p[n - 1] - std::pow(nd, alpha) * (nd - alpha - 1.0);
    double s = a0 * f(0.0);
    double comp = 0.0;
    for (long j = 1; j < n; ++j) {
        double aj = p[n - j + 1] + p[n - j - 1] - 2.0 * p[n - j];
        neumaier(s, comp, aj * f(static_cast<double>(j) * hadj));
    }
    neumaier(s, comp, f(t));
    return (s + comp) * std::pow(hadj, alpha) / gamma(alpha + 2.0);
}

SampledFunction frac_integral(const SampledFunction& f, double alpha) {
    if (!(alpha > 0.0) || alpha > 1.0)
        throw std::domain_error("frac_integral: alpha must be in (0, 1]");
    if (!(f.h > 0.0)) throw ValidationError("frac_integral: step must be positive");
    if (f.values.size() < 2)
        throw ValidationError("frac_integral: need at least two samples");
    long last = static_cast<long>(f.values.size()) - 1;
    double ap1 = alpha + 1.0;

    std::vector<double> p(last + 2);
    for (long k = 0; k <= last + 1; ++k) p[k] = std::pow(static_cast<double>(k), ap1);

    SampledFunction out;
    out.h = f.h;
    out.values.assign(f.values.size(), 0.0);
    double scale = std::pow(f.h, alpha) / gamma(alpha + 2.0);
    for (long n = 1; n <= last; ++n) {
        double nd = static_cast<double>(n);
        double a0 = p[n - 1] - std::pow(nd, alpha) * (nd - alpha - 1.0);
        double s = a0 * f.values[0];
        double comp = 0.0;
        for (long j = 1; j < n; ++j) {
            double aj = p[n - j + 1] + p[n - j - 1] - 2.0 * p[n - j];
            neumaier(s, comp, aj * f.values[j]);
        }
        neumaier(s, comp, f.values[n]);
        out.values[n] = (s + comp) * scale;
    }
    return out;
}

SampledFunction sample_function(const std::function<double(double)>& f, double t_max,
                                int points) {
    if (points < 2) throw ValidationError("sample_function: need at least two points");
    if (!(t_max > 0.0)) throw ValidationError("sample_function: t_max must be positive");
    SampledFunction out;
    out.h = t_max / (points - 1);
    out.values.resize(points);
    for (int i = 0; i < points; ++i) out.values[i] = f(i * out.h);
    return out;
}

}  // namespace fracsol
