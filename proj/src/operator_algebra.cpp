#include "fracsol/operator_algebra.hpp"

#include <algorithm>
#include <cfloat>
#include <cmath>
#include <random>

#include "fracsol/errors.hpp"

namespace fracsol {
namespace {

using cplx = std::complex<double>;

double max_coeff(const OperatorPoly& op) {
    double m = 0.0;
    for (const auto& c : op.coeffs) m = std::max(m, std::abs(c));
    return m;
}

cplx horner(const std::vector<cplx>& c, cplx s) {
    cplx acc = 0.0;
    for (size_t j = c.size(); j-- > 0;) acc = acc * s + c[j];
    return acc;
}

// Coefficients of the order-th derivative of the polynomial with
// coefficients c (ascending powers).
std::vector<cplx> derivative_coeffs(std::vector<cplx> c, int order) {
    for (int d = 0; d < order; ++d) {
        if (c.size() <= 1) return {cplx(0.0)};
        std::vector<cplx> next(c.size() - 1);
        for (size_t j = 1; j < c.size(); ++j) next[j - 1] = c[j] * static_cast<double>(j);
        c = std::move(next);
    }
    return c;
}

// One Durand-Kerner run; returns the worst relative move of the last sweep.
double durand_kerner(const std::vector<cplx>& monic, std::vector<cplx>& z, int max_sweeps) {
    int n = static_cast<int>(z.size());
    double maxmove = HUGE_VAL;
    for (int sweep = 0; sweep < max_sweeps; ++sweep) {
        maxmove = 0.0;
        for (int i = 0; i < n; ++i) {
            cplx den = 1.0;
            for (int j = 0; j < n; ++j)
                if (j != i) den *= z[i] - z[j];
            if (std::abs(den) == 0.0) {
                z[i] += cplx(1e-6, 1e-6) * static_cast<double>(i + 1);
                maxmove = HUGE_VAL;
                continue;
            }
            cplx delta = horner(monic, z[i]) / den;
            z[i] -= delta;
            maxmove = std::max(maxmove, std::abs(delta) / std::max(1.0, std::abs(z[i])));
        }
        if (maxmove < 1e-14) break;
    }
    return maxmove;
}

// Merge threshold around centroid c for a degree-n polynomial.  A root of
// multiplicity r is only determined to ~eps^(1/r), and estimates of one
// multiple root must land in a single cluster, so the pair threshold is
// keyed to the worst multiplicity the degree allows.  Two genuinely
// distinct roots closer than this are reported as one multiple root and
// then rejected by the residual check rather than silently mislocated.
double cluster_tol(int n, cplx c) {
    double base = std::max(1e-6, std::pow(1e3 * DBL_EPSILON, 1.0 / n));
    return base * std::max(1.0, std::abs(c));
}

// Compensated Horner for the polish step.  Plain double evaluation has a
// zero set that is an interval of machine numbers around each root, so
// Newton can stall a few ulp away from the correctly rounded root; the
// error-free-transformation products and sums below keep enough residue to
// steer it onto the nearest representable root.
struct DD {
    double hi = 0.0, lo = 0.0;
};

DD two_sum(double a, double b) {
    double s = a + b;
    double bb = s - a;
    return {s, (a - (s - bb)) + (b - bb)};
}

DD two_prod(double a, double b) {
    double p = a * b;
    return {p, std::fma(a, b, -p)};
}

DD dd_add(DD a, DD b) {
    DD s = two_sum(a.hi, b.hi);
    double lo = s.lo + a.lo + b.lo;
    double hi = s.hi + lo;
    return {hi, lo - (hi - s.hi)};
}

DD dd_mul_d(DD a, double b) {
    DD p = two_prod(a.hi, b);
    p.lo += a.lo * b;
    double hi = p.hi + p.lo;
    return {hi, p.lo - (hi - p.hi)};
}

cplx horner_compensated(const std::vector<cplx>& c, cplx s) {
    DD re, im;
    for (size_t j = c.size(); j-- > 0;) {
        DD nre = dd_add(dd_mul_d(re, s.real()), dd_mul_d({-im.hi, -im.lo}, s.imag()));
        DD nim = dd_add(dd_mul_d(re, s.imag()), dd_mul_d(im, s.real()));
        re = dd_add(nre, {c[j].real(), 0.0});
        im = dd_add(nim, {c[j].imag(), 0.0});
    }
    return {re.hi + re.lo, im.hi + im.lo};
}

}  // namespace

int degree(const OperatorPoly& op) {
    for (size_t j = op.coeffs.size(); j-- > 0;)
        if (std::abs(op.coeffs[j]) > 0.0) return static_cast<int>(j);
    throw ValidationError("operator has no nonzero coefficients");
}

std::complex<double> eval_poly(const OperatorPoly& op, std::complex<double> s) {
    if (op.coeffs.empty()) throw ValidationError("operator has no coefficients");
    return horner(op.coeffs, s);
}

std::complex<double> eval_poly_derivative(const OperatorPoly& op, std::complex<double> s,
                                          int order) {
    if (order < 0) throw ValidationError("negative derivative order");
    return horner(derivative_coeffs(op.coeffs, order), s);
}

RootSet char_roots(const OperatorPoly& op) {
    int n = degree(op);
    if (n == 0) return {};
    std::vector<cplx> monic(op.coeffs.begin(), op.coeffs.begin() + n + 1);
    for (auto& c : monic) c /= op.coeffs[n];

    std::vector<cplx> z(n);
    cplx seed(0.4, 0.9);
    cplx w = 1.0;
    for (int i = 0; i < n; ++i) {
        z[i] = w;
        w *= seed;
    }
    // Around a multiple root the Weierstrass corrections stall at the
    // cluster radius (~eps^(1/m)) instead of shrinking to rounding level,
    // so "small enough" here is deliberately loose; per-root residuals are
    // verified after polishing.
    double maxmove = durand_kerner(monic, z, 500);
    std::mt19937 rng(12345);
    std::uniform_real_distribution<double> u(-0.5, 0.5);
    for (int attempt = 0; attempt < 3 && !(maxmove < 1e-3); ++attempt) {
        w = 1.0;
        for (int i = 0; i < n; ++i) {
            z[i] = w * (1.0 + 0.3 * u(rng)) + cplx(u(rng), u(rng));
            w *= seed;
        }
        maxmove = durand_kerner(monic, z, 500);
    }
    if (!(maxmove < 1e-3))
        throw SolverError("char_roots: root iteration did not converge");

    // Group estimates that can only be one multiple root (union-find with a
    // transitive pairwise threshold).
    std::sort(z.begin(), z.end(), [](cplx a, cplx b) {
        if (a.real() != b.real()) return a.real() < b.real();
        return a.imag() < b.imag();
    });
    std::vector<int> parent(n);
    for (int i = 0; i < n; ++i) parent[i] = i;
    auto find = [&](int i) {
        while (parent[i] != i) i = parent[i] = parent[parent[i]];
        return i;
    };
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            if (std::abs(z[i] - z[j]) <= cluster_tol(n, (z[i] + z[j]) * 0.5))
                parent[find(i)] = find(j);
        }
    }
    std::vector<std::vector<cplx>> clusters;
    for (int rep = 0; rep < n; ++rep) {
        if (find(rep) != rep) continue;
        std::vector<cplx> members;
        for (int i = 0; i < n; ++i)
            if (find(i) == rep) members.push_back(z[i]);
        clusters.push_back(std::move(members));
    }

    // Newton on the (r-1)-th derivative, where the root is simple.
    auto polish = [&](cplx root, int r) {
        std::vector<cplx> d = derivative_coeffs(monic, r - 1);
        std::vector<cplx> dp = derivative_coeffs(d, 1);
        for (int it = 0; it < 8; ++it) {
            cplx den = horner(dp, root);
            if (std::abs(den) == 0.0) break;
            cplx step = horner_compensated(d, root) / den;
            if (!std::isfinite(step.real()) || !std::isfinite(step.imag())) break;
            root -= step;
            if (std::abs(step) <= 1e-17 * std::max(1.0, std::abs(root))) break;
        }
        return root;
    };

    RootSet out;
    for (const auto& cl : clusters) {
        int r = static_cast<int>(cl.size());
        cplx root = 0.0;
        for (const auto& m : cl) root += m;
        root /= static_cast<double>(r);
        out.roots.push_back({polish(root, r), r});
    }

    // A multiple root can straddle the pairwise threshold above: the raw
    // estimates stall at the iteration's acceptance radius, which is the
    // same order as the cluster tolerance.  Polished representatives are
    // orders of magnitude tighter, so merge any that now coincide and
    // re-polish at the combined multiplicity until stable.
    for (bool merged = true; merged;) {
        merged = false;
        for (size_t i = 0; i < out.roots.size() && !merged; ++i) {
            for (size_t j = i + 1; j < out.roots.size() && !merged; ++j) {
                cplx mid = (out.roots[i].value + out.roots[j].value) * 0.5;
                if (std::abs(out.roots[i].value - out.roots[j].value) > cluster_tol(n, mid))
                    continue;
                int r = out.roots[i].multiplicity + out.roots[j].multiplicity;
                out.roots[i] = {polish(mid, r), r};
                out.roots.erase(out.roots.begin() + j);
                merged = true;
            }
        }
    }

    int total = 0;
    for (const RootInfo& ri : out.roots) {
        double resid = std::abs(eval_poly(op, ri.value));
        if (resid > 1e-10 * max_coeff(op))
            throw SolverError("char_roots: polished root residual too large");
        total += ri.multiplicity;
    }
    if (total != n) throw SolverError("char_roots: multiplicities do not sum to degree");
    std::sort(out.roots.begin(), out.roots.end(), [](const RootInfo& a, const RootInfo& b) {
        if (a.value.real() != b.value.real()) return a.value.real() < b.value.real();
        return a.value.imag() < b.value.imag();
    });
    return out;
}

OperatorPoly deflate(const OperatorPoly& op, std::complex<double> root, int multiplicity) {
    if (multiplicity < 0) throw ValidationError("deflate: negative multiplicity");
    int n = degree(op);
    if (multiplicity > n) throw ValidationError("deflate: multiplicity exceeds degree");
    double scale = max_coeff(op);
    std::vector<cplx> c(op.coeffs.begin(), op.coeffs.begin() + n + 1);
    for (int step = 0; step < multiplicity; ++step) {
        std::vector<cplx> b(c.size() - 1);
        cplx carry = 0.0;
        for (size_t j = c.size(); j-- > 1;) {
            carry = c[j] + root * carry;
            b[j - 1] = carry;
        }
        cplx rem = c[0] + root * carry;
        if (std::abs(rem) > 1e-9 * scale)
            throw SolverError("deflate: remainder too large, not a root of that multiplicity");
        c = std::move(b);
    }
    return {op.alpha, c};
}

OperatorPoly shift(const OperatorPoly& op, std::complex<double> c) {
    int n = degree(op);
    std::vector<cplx> w(op.coeffs.begin(), op.coeffs.begin() + n + 1);
    std::vector<cplx> out(n + 1);
    for (int j = 0; j < n; ++j) {
        // Synthetic division of w by (X - c); remainder is the next Taylor
        // coefficient of p at c.
        std::vector<cplx> b(w.size() - 1);
        cplx carry = 0.0;
        for (size_t i = w.size(); i-- > 1;) {
            carry = w[i] + c * carry;
            b[i - 1] = carry;
        }
        out[j] = w[0] + c * carry;
        w = std::move(b);
    }
    out[n] = w[0];
    return {op.alpha, out};
}

TermSum apply(const OperatorPoly& op, const TermSum& y) {
    if (op.alpha != y.alpha) throw ValidationError("apply: operator and sum have different orders");
    if (op.coeffs.empty()) throw ValidationError("apply: operator has no coefficients");
    TermSum acc;
    acc.alpha = y.alpha;
    TermSum cur = normalize(y);
    for (size_t j = 0; j < op.coeffs.size(); ++j) {
        if (j > 0) cur = d_alpha(cur);
        acc = add(acc, scale(cur, op.coeffs[j]));
    }
    return acc;
}

std::vector<std::complex<double>> reciprocal_series(const std::vector<std::complex<double>>& s,
                                                    int m) {
    if (s.empty() || std::abs(s[0]) == 0.0)
        throw SolverError("reciprocal_series: constant term is zero");
    if (m < 0) throw ValidationError("reciprocal_series: negative truncation order");
    std::vector<cplx> q(m + 1);
    q[0] = 1.0 / s[0];
    for (int j = 1; j <= m; ++j) {
        cplx acc = 0.0;
        for (int i = 1; i <= j; ++i) {
            cplx si = i < static_cast<int>(s.size()) ? s[i] : cplx(0.0);
            acc += si * q[j - i];
        }
        q[j] = -acc / s[0];
    }
    return q;
}

}  // namespace fracsol
