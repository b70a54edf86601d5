#include <algorithm>
#include <cmath>
#include <complex>
#include <random>

#include "doctest.h"
#include "fracsol/errors.hpp"
#include "fracsol/operator_algebra.hpp"

using namespace fracsol;
using cplx = std::complex<double>;

namespace {

// Expand prod (X - r_i)^(m_i) into ascending coefficients.
std::vector<cplx> expand(const std::vector<RootInfo>& roots) {
    std::vector<cplx> c = {1.0};
    for (const auto& r : roots) {
        for (int m = 0; m < r.multiplicity; ++m) {
            std::vector<cplx> next(c.size() + 1, 0.0);
            for (size_t j = 0; j < c.size(); ++j) {
                next[j + 1] += c[j];
                next[j] -= r.value * c[j];
            }
            c = std::move(next);
        }
    }
    return c;
}

}  // namespace

TEST_CASE("degree, eval_poly and derivatives") {
    OperatorPoly p{0.5, {6.0, -5.0, 1.0}};
    CHECK(degree(p) == 2);
    CHECK(std::abs(eval_poly(p, 2.0)) <= 1e-15);
    CHECK(std::abs(eval_poly(p, {0.0, 1.0}) - cplx(5.0, -5.0)) <= 1e-15);
    CHECK(std::abs(eval_poly_derivative(p, 1.0, 1) - cplx(-3.0)) <= 1e-15);
    CHECK(std::abs(eval_poly_derivative(p, 1.5, 2) - cplx(2.0)) <= 1e-15);

    OperatorPoly cubed{0.5, {0.0, 0.0, 0.0, 1.0}};
    CHECK(std::abs(eval_poly_derivative(cubed, 2.0, 2) - cplx(12.0)) <= 1e-15);

    OperatorPoly zero{0.5, {0.0, 0.0}};
    CHECK_THROWS_AS(degree(zero), ValidationError);
}

TEST_CASE("char_roots finds distinct real roots to machine accuracy") {
    OperatorPoly p{0.5, {6.0, -5.0, 1.0}};
    RootSet r = char_roots(p);
    REQUIRE(r.roots.size() == 2);
    CHECK(std::abs(r.roots[0].value - cplx(2.0)) <= 1e-12);
    CHECK(std::abs(r.roots[1].value - cplx(3.0)) <= 1e-12);
    CHECK(r.roots[0].multiplicity == 1);
    CHECK(r.roots[1].multiplicity == 1);
}

TEST_CASE("char_roots handles repeated roots with the derivative polish") {
    OperatorPoly dbl{0.5, {2.25, -3.0, 1.0}};
    RootSet r2 = char_roots(dbl);
    REQUIRE(r2.roots.size() == 1);
    CHECK(r2.roots[0].multiplicity == 2);
    CHECK(std::abs(r2.roots[0].value - cplx(1.5)) <= 1e-8);

    OperatorPoly tri{0.5, {-8.0, 12.0, -6.0, 1.0}};
    RootSet r3 = char_roots(tri);
    REQUIRE(r3.roots.size() == 1);
    CHECK(r3.roots[0].multiplicity == 3);
    CHECK(std::abs(r3.roots[0].value - cplx(2.0)) <= 1e-8);

    // mixed: (X-1)^2 (X+2)
    OperatorPoly mixed{0.5, {2.0, -3.0, 0.0, 1.0}};
    RootSet rm = char_roots(mixed);
    REQUIRE(rm.roots.size() == 2);
    CHECK(rm.roots[0].multiplicity == 1);
    CHECK(std::abs(rm.roots[0].value - cplx(-2.0)) <= 1e-10);
    CHECK(rm.roots[1].multiplicity == 2);
    CHECK(std::abs(rm.roots[1].value - cplx(1.0)) <= 1e-8);
}

TEST_CASE("char_roots orders complex pairs by (Re, Im)") {
    OperatorPoly p{0.6, {5.0, 2.0, 1.0}};
    RootSet r = char_roots(p);
    REQUIRE(r.roots.size() == 2);
    CHECK(std::abs(r.roots[0].value - cplx(-1.0, -2.0)) <= 1e-12);
    CHECK(std::abs(r.roots[1].value - cplx(-1.0, 2.0)) <= 1e-12);
}

TEST_CASE("char_roots reconstructs random root sets") {
    std::mt19937 rng(424242);
    std::uniform_real_distribution<double> u(-3.0, 3.0);
    std::uniform_int_distribution<int> pick_deg(1, 4);
    for (int rep = 0; rep < 60; ++rep) {
        int deg = pick_deg(rng);
        std::vector<RootInfo> truth;
        int left = deg;
        while (left > 0) {
            std::uniform_int_distribution<int> pick_m(1, std::min(left, 3));
            int m = pick_m(rng);
            cplx v;
            bool ok = false;
            for (int tries = 0; tries < 100 && !ok; ++tries) {
                v = {u(rng), u(rng)};
                ok = true;
                for (const auto& t : truth)
                    if (std::abs(t.value - v) < 0.05) ok = false;
            }
            if (!ok) break;
            truth.push_back({v, m});
            left -= m;
        }
        if (left != 0) continue;
        OperatorPoly p{0.5, expand(truth)};
        RootSet got = char_roots(p);
        REQUIRE(got.roots.size() == truth.size());
        for (const auto& t : truth) {
            bool found = false;
            for (const auto& g : got.roots) {
                if (std::abs(g.value - t.value) <= 1e-8 * std::max(1.0, std::abs(t.value)) &&
                    g.multiplicity == t.multiplicity)
                    found = true;
            }
            INFO("root (", t.value.real(), ",", t.value.imag(), ") mult ", t.multiplicity);
            CHECK(found);
        }
    }
}

TEST_CASE("shift computes Taylor coefficients at the new origin") {
    OperatorPoly p{0.5, {6.0, -5.0, 1.0}};
    OperatorPoly s = shift(p, 2.0);
    REQUIRE(s.coeffs.size() == 3);
    CHECK(std::abs(s.coeffs[0]) <= 1e-14);
    CHECK(std::abs(s.coeffs[1] - cplx(-1.0)) <= 1e-14);
    CHECK(std::abs(s.coeffs[2] - cplx(1.0)) <= 1e-14);

    OperatorPoly back = shift(s, -2.0);
    for (int j = 0; j < 3; ++j) CHECK(std::abs(back.coeffs[j] - p.coeffs[j]) <= 1e-12);
}

TEST_CASE("deflate divides out known roots and rejects non-roots") {
    OperatorPoly p{0.5, {6.0, -5.0, 1.0}};
    OperatorPoly q = deflate(p, 2.0, 1);
    REQUIRE(q.coeffs.size() == 2);
    CHECK(std::abs(q.coeffs[0] - cplx(-3.0)) <= 1e-14);
    CHECK(std::abs(q.coeffs[1] - cplx(1.0)) <= 1e-14);
    CHECK_THROWS_AS(deflate(p, 2.5, 1), SolverError);

    OperatorPoly tri{0.5, {-8.0, 12.0, -6.0, 1.0}};
    OperatorPoly lin = deflate(tri, 2.0, 2);
    REQUIRE(lin.coeffs.size() == 2);
    CHECK(std::abs(lin.coeffs[0] - cplx(-2.0)) <= 1e-13);
}

TEST_CASE("apply annihilates the matching mode exactly and near-exactly") {
    double alpha = 0.4;
    OperatorPoly p{alpha, {-2.0, 1.0}};  // D^a - 2
    TermSum e;
    e.alpha = alpha;
    e.terms = {{3.0, 0, {2.0, 0.0}}};
    CHECK(apply(p, e).terms.empty());

    // Root found numerically: the residue must be dust relative to the scale.
    OperatorPoly q{alpha, {6.0, -5.0, 1.0}};
    cplx root = char_roots(q).roots[0].value;
    TermSum er;
    er.alpha = alpha;
    er.terms = {{1.0, 0, root}};
    TermSum res = apply(q, er);
    double worst = 0.0;
    for (const auto& t : res.terms) worst = std::max(worst, std::abs(t.coeff));
    CHECK(worst <= 1e-12 * 6.0);
}

TEST_CASE("apply composes fractional derivatives by the power rule") {
    double alpha = 0.35;
    OperatorPoly d2{alpha, {0.0, 0.0, 1.0}};  // D^(2a)
    TermSum s;
    s.alpha = alpha;
    s.terms = {{1.0, 2, {0.0, 0.0}}};
    TermSum out = apply(d2, s);
    REQUIRE(out.terms.size() == 1);
    CHECK(out.terms[0].k == 0);
    CHECK(std::abs(out.terms[0].coeff - fracsol::gamma(1.0 + 2.0 * alpha)) <= 1e-13);

    TermSum mismatched;
    mismatched.alpha = 0.5;
    CHECK_THROWS_AS(apply(d2, mismatched), ValidationError);
}

TEST_CASE("reciprocal_series inverts the shifted operator series") {
    std::vector<cplx> s = {6.0, -5.0, 1.0};
    auto q = reciprocal_series(s, 6);
    for (int j = 0; j <= 6; ++j) {
        double expect = (std::pow(3.0, j + 1) - std::pow(2.0, j + 1)) / std::pow(6.0, j + 1);
        INFO("j = ", j);
        CHECK(std::abs(q[j] - cplx(expect)) <= 1e-14 * std::abs(expect));
    }
    // convolution sanity: s * q = 1 + O(X^7)
    for (int j = 1; j <= 6; ++j) {
        cplx conv = 0.0;
        for (int i = 0; i <= j; ++i)
            conv += (i < 3 ? s[i] : cplx(0.0)) * q[j - i];
        CHECK(std::abs(conv) <= 1e-14);
    }
    CHECK_THROWS_AS(reciprocal_series({0.0, 1.0}, 3), SolverError);
}
