#include <cmath>
#include <complex>
#include <random>

#include "doctest.h"
#include "fracsol/errors.hpp"
#include "fracsol/solver.hpp"
#include "support/reference_values.hpp"

using namespace fracsol;
namespace ref = fracsol_test_ref;
using cplx = std::complex<double>;

namespace {

OperatorPoly make_op(double alpha, std::initializer_list<cplx> coeffs) {
    OperatorPoly op;
    op.alpha = alpha;
    op.coeffs = coeffs;
    return op;
}

TermSum make_forcing(double alpha, std::initializer_list<FracTerm> terms) {
    TermSum g;
    g.alpha = alpha;
    g.terms = terms;
    return g;
}

const FracTerm* find_term(const TermSum& s, int k, cplx a) {
    for (const FracTerm& t : s.terms) {
        if (t.k == k && std::abs(t.a - a) <= 1e-9 * std::max(1.0, std::abs(a))) return &t;
    }
    return nullptr;
}

}  // namespace

TEST_CASE("complementary basis spans every root with its multiplicity") {
    OperatorPoly op = make_op(0.5, {6.0, -5.0, 1.0});
    RootSet roots = char_roots(op);
    auto basis = complementary_basis(op, roots);
    REQUIRE(basis.size() == 2);
    CHECK(basis[0].terms.size() == 1);
    CHECK(basis[0].terms[0].k == 0);
    CHECK(std::abs(basis[0].terms[0].a - cplx(2.0)) <= 1e-10);
    CHECK(std::abs(basis[1].terms[0].a - cplx(3.0)) <= 1e-10);

    // Double root contributes both the plain and the t^a-dressed mode.
    OperatorPoly op2 = make_op(0.5, {4.0, -4.0, 1.0});
    RootSet roots2 = char_roots(op2);
    auto basis2 = complementary_basis(op2, roots2);
    REQUIRE(basis2.size() == 2);
    CHECK(basis2[0].terms[0].k == 0);
    CHECK(basis2[1].terms[0].k == 1);
}

TEST_CASE("polynomial forcing expands through the reciprocal series") {
    // (D^(2a) - 5 D^a + 6) y = t^(6a) at a = 1/3.  The series inverse of
    // 1/((2 - X)(3 - X)) has q_j = (3^(j+1) - 2^(j+1))/6^(j+1), and the power
    // rule turns q_j into q_j Gamma(3)/Gamma(1 + (6-j)/3) on t^((6-j)a).
    double alpha = 1.0 / 3.0;
    OperatorPoly op = make_op(alpha, {6.0, -5.0, 1.0});
    RootSet roots = char_roots(op);
    TermSum g = make_forcing(alpha, {{1.0, 6, 0.0}});
    TermSum pi = particular(op, roots, g);
    REQUIRE(pi.terms.size() == 7);
    for (int j = 0; j <= 6; ++j) {
        double qj = (std::pow(3.0, j + 1) - std::pow(2.0, j + 1)) / std::pow(6.0, j + 1);
        double expect = qj * gamma_ratio(3.0, 1.0 + (6.0 - j) * alpha);
        const FracTerm* t = find_term(pi, 6 - j, 0.0);
        REQUIRE(t != nullptr);
        INFO("j = ", j);
        CHECK(std::abs(t->coeff - cplx(expect)) <= 1e-12 * std::abs(expect));
        CHECK(t->coeff.real() > 0.0);
    }
}

TEST_CASE("non-resonant pure mode divides by the characteristic value") {
    double alpha = 0.6;
    OperatorPoly op = make_op(alpha, {6.0, -5.0, 1.0});  // roots 2, 3
    RootSet roots = char_roots(op);
    TermSum g = make_forcing(alpha, {{1.0, 0, 1.0}});
    TermSum pi = particular(op, roots, g);
    REQUIRE(pi.terms.size() == 1);
    CHECK(pi.terms[0].k == 0);
    CHECK(std::abs(pi.terms[0].a - cplx(1.0)) <= 1e-12);
    // 1/((1-2)(1-3)) = 1/2
    CHECK(std::abs(pi.terms[0].coeff - cplx(0.5)) <= 1e-12);
}

TEST_CASE("resonant modes pick up powers of t^a") {
    double alpha = 0.6;
    // Single root: (D^a - 2) with forcing E_a(2 t^a)
    OperatorPoly op1 = make_op(alpha, {-2.0, 1.0});
    RootSet r1 = char_roots(op1);
    TermSum pi1 = particular(op1, r1, make_forcing(alpha, {{1.0, 0, 2.0}}));
    REQUIRE(pi1.terms.size() == 1);
    CHECK(pi1.terms[0].k == 1);
    CHECK(std::abs(pi1.terms[0].coeff - cplx(1.0 / fracsol::gamma(1.0 + alpha))) <= 1e-12);

    // Root of the deflated pair: (X-2)(X-3) forced at 2
    OperatorPoly op2 = make_op(alpha, {6.0, -5.0, 1.0});
    RootSet r2 = char_roots(op2);
    TermSum pi2 = particular(op2, r2, make_forcing(alpha, {{1.0, 0, 2.0}}));
    REQUIRE(pi2.terms.size() == 1);
    CHECK(pi2.terms[0].k == 1);
    // 1/((2-3) Gamma(1.6))
    CHECK(std::abs(pi2.terms[0].coeff - cplx(-1.0 / ref::kGamma_1_6)) <= 1e-12);

    // Double root: (X-2)^2 forced at 2
    OperatorPoly op3 = make_op(alpha, {4.0, -4.0, 1.0});
    RootSet r3 = char_roots(op3);
    TermSum pi3 = particular(op3, r3, make_forcing(alpha, {{1.0, 0, 2.0}}));
    REQUIRE(pi3.terms.size() == 1);
    CHECK(pi3.terms[0].k == 2);
    CHECK(std::abs(pi3.terms[0].coeff - cplx(1.0 / ref::kGamma_2_2)) <= 1e-12);
}

TEST_CASE("degree-one operator with power forcing matches the closed form") {
    // (D^a - c) y = t^a has PI -(1/c)(t^a + Gamma(1+a)/c)
    double alpha = 0.5;
    double c = 2.0;
    OperatorPoly op = make_op(alpha, {-c, 1.0});
    RootSet roots = char_roots(op);
    TermSum pi = particular(op, roots, make_forcing(alpha, {{1.0, 1, 0.0}}));
    REQUIRE(pi.terms.size() == 2);
    const FracTerm* lin = find_term(pi, 1, 0.0);
    const FracTerm* con = find_term(pi, 0, 0.0);
    REQUIRE(lin != nullptr);
    REQUIRE(con != nullptr);
    CHECK(std::abs(lin->coeff - cplx(-1.0 / c)) <= 1e-12);
    CHECK(std::abs(con->coeff - cplx(-ref::kGamma_1_5 / (c * c))) <= 1e-12);
}

TEST_CASE("trig forcing of an undamped operator stays a pure cosine") {
    // (D^(2a) + w^2) y = F cos_a(b t^a), PI = F/(w^2 - b^2) cos_a(b t^a)
    double alpha = 0.5, w = 2.0, b = 1.0, F = 3.0;
    OperatorPoly op = make_op(alpha, {w * w, 0.0, 1.0});
    RootSet roots = char_roots(op);
    TermSum g = make_forcing(alpha, {{F / 2.0, 0, cplx(0.0, b)}, {F / 2.0, 0, cplx(0.0, -b)}});
    TermSum pi = particular(op, roots, g);
    RealRendering rr = to_real(pi);
    REQUIRE(rr.atoms.size() == 1);
    CHECK(rr.atoms[0].trig == RealAtom::Trig::cos);
    CHECK(rr.atoms[0].q == doctest::Approx(b).epsilon(1e-12));
    CHECK(std::abs(rr.atoms[0].coeff - F / (w * w - b * b)) <= 1e-12);
}

TEST_CASE("trig forcing of a damped operator splits into cos and sin parts") {
    // (D^(2a) + 2c D^a + c^2 + w^2) y = F cos_a(b t^a).  With p(ib) = u + iv,
    // u = c^2 + w^2 - b^2 and v = 2cb, the PI is F (u cos + v sin)/(u^2 + v^2).
    double alpha = 0.6, c = 0.5, w = 2.0, b = 1.0, F = 1.0;
    OperatorPoly op = make_op(alpha, {c * c + w * w, 2.0 * c, 1.0});
    RootSet roots = char_roots(op);
    TermSum g = make_forcing(alpha, {{F / 2.0, 0, cplx(0.0, b)}, {F / 2.0, 0, cplx(0.0, -b)}});
    TermSum pi = particular(op, roots, g);
    RealRendering rr = to_real(pi);
    REQUIRE(rr.atoms.size() == 2);
    double u = c * c + w * w - b * b;
    double v = 2.0 * c * b;
    double delta = u * u + v * v;
    CHECK(delta == doctest::Approx(11.5625).epsilon(1e-15));
    const RealAtom* cosa = nullptr;
    const RealAtom* sina = nullptr;
    for (const RealAtom& at : rr.atoms) {
        if (at.trig == RealAtom::Trig::cos) cosa = &at;
        if (at.trig == RealAtom::Trig::sin) sina = &at;
    }
    REQUIRE(cosa != nullptr);
    REQUIRE(sina != nullptr);
    CHECK(std::abs(cosa->coeff - F * u / delta) <= 1e-12);
    CHECK(std::abs(sina->coeff - F * v / delta) <= 1e-12);
    CHECK(sina->coeff > 0.0);
}

TEST_CASE("particular is additive over forcing atoms") {
    std::mt19937 rng(777);
    std::uniform_real_distribution<double> coeff(-2.0, 2.0);
    std::uniform_int_distribution<int> power(0, 3);
    double alpha = 0.7;
    OperatorPoly op = make_op(alpha, {2.0, -3.0, 1.0});  // roots 1, 2
    RootSet roots = char_roots(op);
    for (int trial = 0; trial < 25; ++trial) {
        FracTerm t1{coeff(rng), power(rng), cplx(coeff(rng), 0.0)};
        FracTerm t2{coeff(rng), power(rng), cplx(0.0, coeff(rng))};
        TermSum g1 = make_forcing(alpha, {t1});
        TermSum g2 = make_forcing(alpha, {t2});
        TermSum lhs = particular(op, roots, add(g1, g2));
        TermSum rhs = add(particular(op, roots, g1), particular(op, roots, g2));
        TermSum diff = add(lhs, scale(rhs, -1.0));
        double worst = 0.0;
        for (const FracTerm& t : diff.terms) worst = std::max(worst, std::abs(t.coeff));
        double scale_ref = 0.0;
        for (const FracTerm& t : rhs.terms) scale_ref = std::max(scale_ref, std::abs(t.coeff));
        INFO("trial ", trial);
        CHECK(worst <= 1e-11 * std::max(1.0, scale_ref));
    }
}

TEST_CASE("solve assembles roots, basis, and particular with passing gates") {
    double alpha = 1.0 / 3.0;
    Problem p;
    p.op = make_op(alpha, {6.0, -5.0, 1.0});
    p.forcing = make_forcing(alpha, {{1.0, 6, 0.0}});
    Solution sol = solve(p);
    CHECK(sol.alpha == alpha);
    REQUIRE(sol.roots.roots.size() == 2);
    CHECK(sol.complementary.size() == 2);
    CHECK(sol.particular.terms.size() == 7);

    std::vector<double> grid{0.25, 0.5, 1.0, 2.0};
    CHECK(residual(p, sol, grid) <= 1e-9);

    // A 1% corruption of the leading PI coefficient must be clearly visible.
    Solution bad = sol;
    bad.particular.terms.back().coeff *= 1.01;
    CHECK(residual(p, bad, grid) > 1e-3);
}

TEST_CASE("solve validates order compatibility") {
    Problem p;
    p.op = make_op(0.5, {1.0, 1.0});
    p.forcing = make_forcing(0.7, {{1.0, 0, 0.0}});
    CHECK_THROWS_AS(solve(p), ValidationError);
    Problem p2;
    p2.op = make_op(1.5, {1.0, 1.0});
    p2.forcing = make_forcing(1.5, {{1.0, 0, 0.0}});
    CHECK_THROWS_AS(solve(p2), ValidationError);
}

TEST_CASE("homogeneous problems get an empty particular part") {
    Problem p;
    p.op = make_op(0.5, {6.0, -5.0, 1.0});
    p.forcing.alpha = 0.5;
    Solution sol = solve(p);
    CHECK(sol.particular.terms.empty());
    CHECK(sol.complementary.size() == 2);
}

TEST_CASE("quadrature matches variation of constants at order one") {
    // (D - a) y = e^(c t), y(0) = 0 has y = (e^(c t) - e^(a t))/(c - a).
    double a = 1.5, c = -0.5;
    SampledFunction g = sample_function([&](double t) { return std::exp(c * t); }, 2.0, 2001);
    QuadratureResult qr = solve_alpha_order_quadrature(a, g, 1.0);
    REQUIRE(qr.y.values.size() == g.values.size());
    CHECK(qr.y.values[0] == 0.0);
    double worst = 0.0;
    for (size_t i = 0; i < qr.y.values.size(); ++i) {
        double t = i * qr.y.h;
        if (t < 0.1) continue;
        double expect = (std::exp(c * t) - std::exp(a * t)) / (c - a);
        worst = std::max(worst, std::abs(qr.y.values[i] - expect) / std::max(1.0, std::abs(expect)));
    }
    CHECK(worst <= 1e-2);
    CHECK(qr.self_convergence <= 1e-2);
}

TEST_CASE("quadrature with power forcing matches the closed form at order one") {
    // (D - a) y = t: y = -(1/a)(t + 1/a) + e^(a t)/a^2 from y(0) = 0.
    double a = 2.0;
    SampledFunction g = sample_function([](double t) { return t; }, 2.0, 2001);
    QuadratureResult qr = solve_alpha_order_quadrature(a, g, 1.0);
    double worst = 0.0;
    for (size_t i = 0; i < qr.y.values.size(); ++i) {
        double t = i * qr.y.h;
        if (t < 0.1) continue;
        double expect = -(1.0 / a) * (t + 1.0 / a) + std::exp(a * t) / (a * a);
        worst = std::max(worst, std::abs(qr.y.values[i] - expect) / std::max(1.0, std::abs(expect)));
    }
    CHECK(worst <= 1e-2);
}

TEST_CASE("quadrature at a = 0 reduces to the fractional integral") {
    // D^a y = E_a(c t^a) integrates to (E_a(c t^a) - 1)/c at any order.
    double alpha = 0.6, c = 1.2;
    auto mode = [&](double t) {
        return mittag_leffler(alpha, c * std::pow(t, alpha)).value.real();
    };
    SampledFunction g = sample_function(mode, 2.0, 2001);
    QuadratureResult qr = solve_alpha_order_quadrature(0.0, g, alpha);
    double worst = 0.0;
    for (size_t i = 0; i < qr.y.values.size(); ++i) {
        double t = i * qr.y.h;
        if (t < 0.1) continue;
        double expect = (mode(t) - 1.0) / c;
        worst = std::max(worst, std::abs(qr.y.values[i] - expect) / std::max(1.0, std::abs(expect)));
    }
    CHECK(worst <= 1e-2);
}

TEST_CASE("quadrature and term calculus part ways at fractional order") {
    // (D^a - 1.5) y = 1 at a = 0.6.  The quadrature answer is
    // E(1.5 t^a) (1 - E(-1.5 t^a))/1.5, the term-calculus answer with the
    // same y(0) = 0 is (E(1.5 t^a) - 1)/1.5; they would coincide only if
    // E_a(x) E_a(-x) = 1, which fails below order one.  The gap is real and
    // the self-convergence stays tight, so the quadrature is converging to
    // its own limit, not wandering.
    double alpha = 0.6, a = 1.5;
    SampledFunction g = sample_function([](double) { return 1.0; }, 2.0, 2001);
    QuadratureResult qr = solve_alpha_order_quadrature(a, g, alpha);
    auto ml = [&](double z) {
        return mittag_leffler(alpha, z).value.real();
    };
    size_t i1 = 1000;  // t = 1
    double t = i1 * qr.y.h;
    double quad_closed = ml(a * std::pow(t, alpha)) * (1.0 - ml(-a * std::pow(t, alpha))) / a;
    double symbolic = (ml(a * std::pow(t, alpha)) - 1.0) / a;
    CHECK(std::abs(qr.y.values[i1] - quad_closed) <= 1e-2 * std::max(1.0, std::abs(quad_closed)));
    CHECK(std::abs(qr.y.values[i1] - symbolic) > 0.05 * std::abs(symbolic));
    CHECK(qr.self_convergence <= 1e-2);
}

TEST_CASE("quadrature validates its inputs") {
    SampledFunction g = sample_function([](double t) { return t; }, 2.0, 21);
    CHECK_THROWS_AS(solve_alpha_order_quadrature(1.0, g, 1.2), std::domain_error);
    SampledFunction bad;
    bad.h = 0.0;
    bad.values = {0.0, 1.0, 2.0};
    CHECK_THROWS_AS(solve_alpha_order_quadrature(1.0, bad, 0.5), ValidationError);
    SampledFunction tiny;
    tiny.h = 0.1;
    tiny.values = {0.0, 1.0};
    CHECK_THROWS_AS(solve_alpha_order_quadrature(1.0, tiny, 0.5), ValidationError);
}
