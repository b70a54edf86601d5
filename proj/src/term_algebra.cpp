#include "fracsol/term_algebra.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "fracsol/errors.hpp"

namespace fracsol {
namespace {

bool rates_match(std::complex<double> x, std::complex<double> y) {
    return std::abs(x - y) <= kRateMergeTol * std::max(1.0, std::abs(x));
}

void sort_terms(std::vector<FracTerm>& v) {
    std::sort(v.begin(), v.end(), [](const FracTerm& x, const FracTerm& y) {
        if (x.k != y.k) return x.k < y.k;
        if (x.a.real() != y.a.real()) return x.a.real() < y.a.real();
        return x.a.imag() < y.a.imag();
    });
}

std::string fmt_num(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.10g", v);
    return buf;
}

// "t^a", "t^(3a)", "E_a(-1.5*t^a)" style pieces.
std::string power_text(int k) {
    if (k == 1) return "t^a";
    return "t^(" + std::to_string(k) + "a)";
}

std::string rate_text(double r) {
    if (r == 1.0) return "t^a";
    if (r == -1.0) return "-t^a";
    return fmt_num(r) + "*t^a";
}

}  // namespace

TermSum normalize(const TermSum& s) {
    TermSum out;
    out.alpha = s.alpha;
    for (const auto& t : s.terms) {
        bool merged = false;
        for (auto& u : out.terms) {
            if (u.k == t.k && rates_match(u.a, t.a)) {
                u.coeff += t.coeff;
                merged = true;
                break;
            }
        }
        if (!merged) out.terms.push_back(t);
    }
    double cmax = 0.0;
    for (const auto& t : out.terms) cmax = std::max(cmax, std::abs(t.coeff));
    double floor = kCoeffDropTol * cmax;
    std::erase_if(out.terms,
                  [&](const FracTerm& t) { return std::abs(t.coeff) <= floor; });
    sort_terms(out.terms);
    return out;
}

TermSum add(const TermSum& x, const TermSum& y) {
    if (x.alpha != y.alpha) throw ValidationError("add: mixed orders in term sums");
    TermSum out = x;
    out.terms.insert(out.terms.end(), y.terms.begin(), y.terms.end());
    return normalize(out);
}

TermSum scale(const TermSum& s, std::complex<double> c) {
    TermSum out = s;
    for (auto& t : out.terms) t.coeff *= c;
    return normalize(out);
}

TermSum d_alpha(const TermSum& s) {
    TermSum out;
    out.alpha = s.alpha;
    for (const auto& t : s.terms) {
        if (t.a != std::complex<double>(0.0, 0.0))
            out.terms.push_back({t.coeff * t.a, t.k, t.a});
        if (t.k >= 1) {
            double g = gamma_ratio(1.0 + t.k * s.alpha, 1.0 + (t.k - 1) * s.alpha);
            out.terms.push_back({t.coeff * g, t.k - 1, t.a});
        }
    }
    return normalize(out);
}

TermSum d_alpha_n(const TermSum& s, int n) {
    if (n < 0) throw ValidationError("d_alpha_n: negative order");
    TermSum out = s;
    for (int i = 0; i < n; ++i) out = d_alpha(out);
    return out;
}

TermSum integrate_alpha(const TermSum& s) {
    TermSum out;
    out.alpha = s.alpha;
    for (const auto& t : s.terms) {
        if (t.a == std::complex<double>(0.0, 0.0)) {
            double g = gamma_ratio(1.0 + t.k * s.alpha, 1.0 + (t.k + 1) * s.alpha);
            out.terms.push_back({t.coeff * g, t.k + 1, t.a});
            continue;
        }
        // Peel the power down with the product-rule inverse:
        //   I [t^(ka) E] = (1/a) t^(ka) E - (g_k/a) I [t^((k-1)a) E]
        // until the pure mode, whose antiderivative is (E - 1)/a.
        std::complex<double> c = t.coeff;
        int k = t.k;
        while (k >= 1) {
            out.terms.push_back({c / t.a, k, t.a});
            c = -c * gamma_ratio(1.0 + k * s.alpha, 1.0 + (k - 1) * s.alpha) / t.a;
            --k;
        }
        out.terms.push_back({c / t.a, 0, t.a});
        out.terms.push_back({-c / t.a, 0, {0.0, 0.0}});
    }
    return normalize(out);
}

std::complex<double> evaluate(const TermSum& s, double t, const MLConfig& cfg) {
    if (t < 0.0) throw std::domain_error("evaluate: t must be non-negative");
    double ta = std::pow(t, s.alpha);
    std::complex<double> acc = 0.0;
    for (const auto& term : s.terms) {
        double p = term.k == 0 ? 1.0 : std::pow(ta, term.k);
        acc += term.coeff * p * mittag_leffler(s.alpha, term.a * ta, cfg).value;
    }
    return acc;
}

RealRendering to_real(const TermSum& s, double tol) {
    TermSum n = normalize(s);
    RealRendering out;
    out.alpha = n.alpha;
    std::vector<bool> used(n.terms.size(), false);
    for (size_t i = 0; i < n.terms.size(); ++i) {
        if (used[i]) continue;
        const FracTerm& t = n.terms[i];
        double a_scale = std::max(1.0, std::abs(t.a));
        double c_scale = std::max(1.0, std::abs(t.coeff));
        if (std::abs(t.a.imag()) <= tol * a_scale) {
            if (std::abs(t.coeff.imag()) > tol * c_scale)
                throw SolverError("to_real: complex coefficient on a real mode");
            out.atoms.push_back({t.coeff.real(), t.k, t.a.real(), RealAtom::Trig::none, 0.0});
            used[i] = true;
            continue;
        }
        // Complex mode: find the conjugate partner.
        size_t j = i + 1;
        for (; j < n.terms.size(); ++j) {
            if (!used[j] && n.terms[j].k == t.k &&
                std::abs(n.terms[j].a - std::conj(t.a)) <= tol * a_scale)
                break;
        }
        if (j == n.terms.size())
            throw SolverError("to_real: unpaired complex mode, sum is not real-valued");
        if (std::abs(n.terms[j].coeff - std::conj(t.coeff)) > tol * c_scale)
            throw SolverError("to_real: conjugate modes have non-conjugate coefficients");
        used[i] = used[j] = true;
        const FracTerm& up = t.a.imag() > 0.0 ? t : n.terms[j];
        double A = 2.0 * up.coeff.real();
        double B = -2.0 * up.coeff.imag();
        double p = up.a.real();
        double q = up.a.imag();
        double drop = kCoeffDropTol * std::max(1.0, std::max(std::abs(A), std::abs(B)));
        if (std::abs(A) > drop)
            out.atoms.push_back({A, t.k, p, RealAtom::Trig::cos, q});
        if (std::abs(B) > drop)
            out.atoms.push_back({B, t.k, p, RealAtom::Trig::sin, q});
    }
    return out;
}

double evaluate_real(const RealRendering& r, double t, const MLConfig& cfg) {
    if (t < 0.0) throw std::domain_error("evaluate_real: t must be non-negative");
    double ta = std::pow(t, r.alpha);
    double acc = 0.0;
    for (const auto& atom : r.atoms) {
        double v = atom.coeff * (atom.k == 0 ? 1.0 : std::pow(ta, atom.k));
        if (atom.p != 0.0)
            v *= mittag_leffler(r.alpha, atom.p * ta, cfg).value.real();
        if (atom.trig == RealAtom::Trig::cos)
            v *= frac_cos(r.alpha, atom.q, t, cfg);
        else if (atom.trig == RealAtom::Trig::sin)
            v *= frac_sin(r.alpha, atom.q, t, cfg);
        acc += v;
    }
    return acc;
}

std::string render_text(const RealRendering& r) {
    if (r.atoms.empty()) return "0";
    std::string out;
    for (size_t i = 0; i < r.atoms.size(); ++i) {
        const RealAtom& atom = r.atoms[i];
        double c = atom.coeff;
        if (i == 0) {
            if (c < 0.0) out += "-";
        } else {
            out += c < 0.0 ? " - " : " + ";
        }
        double mag = std::abs(c);
        std::vector<std::string> factors;
        if (atom.k > 0) factors.push_back(power_text(atom.k));
        if (atom.p != 0.0) factors.push_back("E_a(" + rate_text(atom.p) + ")");
        if (atom.trig == RealAtom::Trig::cos)
            factors.push_back("cos_a(" + rate_text(atom.q) + ")");
        else if (atom.trig == RealAtom::Trig::sin)
            factors.push_back("sin_a(" + rate_text(atom.q) + ")");
        if (factors.empty()) {
            out += fmt_num(mag);
        } else {
            std::string head = mag == 1.0 ? "" : fmt_num(mag) + "*";
            out += head;
            for (size_t f = 0; f < factors.size(); ++f) {
                if (f) out += "*";
                out += factors[f];
            }
        }
    }
    return out;
}

}  // namespace fracsol
