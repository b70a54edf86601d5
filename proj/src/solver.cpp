#include "fracsol/solver.hpp"

#include <algorithm>
#include <cmath>
#include <complex>

#include "fracsol/errors.hpp"
#include "fracsol/special_functions.hpp"

namespace fracsol {
namespace {

// A forcing rate within this (relative) distance of a characteristic root is
// treated as resonant with it.
constexpr double kRootMatchTol = 1e-6;

int root_multiplicity(const RootSet& roots, std::complex<double> c) {
    for (const RootInfo& r : roots.roots) {
        if (std::abs(r.value - c) <= kRootMatchTol * std::max(1.0, std::abs(c)))
            return r.multiplicity;
    }
    return 0;
}

double max_abs_coeff(const std::vector<std::complex<double>>& cs) {
    double m = 0.0;
    for (const auto& c : cs) m = std::max(m, std::abs(c));
    return m;
}

double max_abs_coeff(const TermSum& s) {
    double m = 0.0;
    for (const FracTerm& t : s.terms) m = std::max(m, std::abs(t.coeff));
    return m;
}

double ml_real(double alpha, double z) {
    return mittag_leffler(alpha, std::complex<double>(z, 0.0)).value.real();
}

}  // namespace

std::vector<TermSum> complementary_basis(const OperatorPoly& op, const RootSet& roots) {
    std::vector<TermSum> basis;
    for (const RootInfo& r : roots.roots) {
        for (int k = 0; k < r.multiplicity; ++k) {
            TermSum b;
            b.alpha = op.alpha;
            b.terms.push_back({1.0, k, r.value});
            basis.push_back(b);
        }
    }
    return basis;
}

TermSum particular_atom(const OperatorPoly& op, const RootSet& roots, const FracTerm& atom) {
    int m = atom.k;
    std::complex<double> c = atom.a;
    if (m < 0) throw ValidationError("particular_atom: negative power index");

    int kmult = root_multiplicity(roots, c);
    OperatorPoly phi = kmult > 0 ? deflate(op, c, kmult) : op;
    OperatorPoly psi = shift(phi, c);

    double scale_c = max_abs_coeff(psi.coeffs);
    if (std::abs(psi.coeffs[0]) <= 1e-12 * scale_c)
        throw SolverError("particular_atom: operator degenerate at the forcing rate");

    std::vector<std::complex<double>> q = reciprocal_series(psi.coeffs, m);

    // Series in D^alpha applied to t^(m alpha) by the power rule; rates stay
    // zero until the mode factor is reattached below.
    TermSum w;
    w.alpha = op.alpha;
    for (int j = 0; j <= m; ++j) {
        double ratio = gamma_ratio(1.0 + m * op.alpha, 1.0 + (m - j) * op.alpha);
        w.terms.push_back({q[j] * ratio, m - j, 0.0});
    }
    for (int i = 0; i < kmult; ++i) w = integrate_alpha(w);
    w = scale(w, atom.coeff);
    for (FracTerm& t : w.terms) t.a = c;
    return normalize(w);
}

TermSum particular(const OperatorPoly& op, const RootSet& roots, const TermSum& g) {
    if (std::abs(op.alpha - g.alpha) > 1e-12)
        throw ValidationError("particular: forcing order differs from operator order");
    TermSum acc;
    acc.alpha = op.alpha;
    for (const FracTerm& atom : g.terms) acc = add(acc, particular_atom(op, roots, atom));
    return acc;
}

Solution solve(const Problem& p) {
    const OperatorPoly& op = p.op;
    if (!(op.alpha > 0.0) || op.alpha > 1.0)
        throw ValidationError("solve: order must be in (0, 1]");
    if (std::abs(op.alpha - p.forcing.alpha) > 1e-12)
        throw ValidationError("solve: forcing order differs from operator order");

    Solution sol;
    sol.alpha = op.alpha;
    sol.roots = char_roots(op);
    sol.complementary = complementary_basis(op, sol.roots);
    sol.particular = particular(op, sol.roots, p.forcing);

    double opmax = max_abs_coeff(op.coeffs);
    double ypmax = max_abs_coeff(sol.particular);
    double gmax = max_abs_coeff(p.forcing);
    double gate = 1e-10 * std::max({1.0, opmax * ypmax, gmax});

    TermSum defect = add(apply(op, sol.particular), scale(p.forcing, -1.0));
    if (max_abs_coeff(defect) > gate)
        throw SolverError("solve: particular part does not reproduce the forcing");

    double basis_gate = 1e-10 * std::max(1.0, opmax);
    for (const TermSum& b : sol.complementary) {
        if (max_abs_coeff(apply(op, b)) > basis_gate)
            throw SolverError("solve: operator fails to annihilate a basis element");
    }
    return sol;
}

double residual(const Problem& p, const Solution& sol, const std::vector<double>& grid) {
    double worst = 0.0;
    for (const TermSum& b : sol.complementary) {
        TermSum r = apply(p.op, b);
        for (double t : grid) worst = std::max(worst, std::abs(evaluate(r, t)));
    }
    TermSum image = apply(p.op, sol.particular);
    for (double t : grid) {
        std::complex<double> diff = evaluate(image, t) - evaluate(p.forcing, t);
        worst = std::max(worst, std::abs(diff));
    }
    return worst;
}

QuadratureResult solve_alpha_order_quadrature(double a, const SampledFunction& g,
                                              double alpha) {
    if (!(alpha > 0.0) || alpha > 1.0)
        throw std::domain_error("solve_alpha_order_quadrature: order must be in (0, 1]");
    if (!(g.h > 0.0))
        throw ValidationError("solve_alpha_order_quadrature: step must be positive");
    size_t n = g.values.size();
    if (n < 3)
        throw ValidationError("solve_alpha_order_quadrature: need at least three samples");

    SampledFunction weighted;
    weighted.h = g.h;
    weighted.values.resize(n);
    std::vector<double> grow(n);
    for (size_t i = 0; i < n; ++i) {
        double z = a * std::pow(i * g.h, alpha);
        weighted.values[i] = g.values[i] * ml_real(alpha, -z);
        grow[i] = ml_real(alpha, z);
    }

    SampledFunction integral = frac_integral(weighted, alpha);
    QuadratureResult out;
    out.y.h = g.h;
    out.y.values.resize(n);
    for (size_t i = 0; i < n; ++i) out.y.values[i] = grow[i] * integral.values[i];

    // Redo the pipeline on every second sample; the gap to the fine answer
    // is the step-halving self-consistency estimate.
    size_t cn = (n - 1) / 2 + 1;
    if (cn >= 2) {
        SampledFunction coarse;
        coarse.h = 2.0 * g.h;
        coarse.values.resize(cn);
        for (size_t j = 0; j < cn; ++j) coarse.values[j] = weighted.values[2 * j];
        SampledFunction ic = frac_integral(coarse, alpha);
        for (size_t j = 0; j < cn; ++j) {
            double yc = grow[2 * j] * ic.values[j];
            out.self_convergence =
                std::max(out.self_convergence, std::abs(out.y.values[2 * j] - yc));
        }
    }
    return out;
}

}  // namespace fracsol
