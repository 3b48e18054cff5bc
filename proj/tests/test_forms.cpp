#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "lcs/conformal.hpp"
#include "lcs/forms.hpp"
#include "test_util.hpp"

using namespace lcs;

TEST_CASE("exterior algebra basics") {
    // dq1 ^ dq2 = -dq2 ^ dq1 on T^2
    TrigForm dq1 = TrigForm::term(2, 0, {0}, TrigPoly::constant(2, 0, 1));
    TrigForm dq2 = TrigForm::term(2, 0, {1}, TrigPoly::constant(2, 0, 1));
    CHECK(dq1.wedge(dq2) == -(dq2.wedge(dq1)));
    CHECK(dq1.wedge(dq1).is_zero());

    // d(sin q1) = cos q1 dq1
    TrigPoly s = TrigPoly::harmonic(2, 0, {1, 0}, true, 1);
    TrigForm ds = TrigForm::function(s).d();
    TrigForm expect = TrigForm::term(2, 0, {0}, TrigPoly::harmonic(2, 0, {1, 0}, false, 1));
    CHECK(ds == expect);

    // d^2 = 0 on random data
    std::mt19937 rng(2);
    for (int it = 0; it < 30; ++it) {
        auto f = testutil::random_form(rng, 1, 2, 1);
        CHECK(f.d().d().is_zero());
    }
}

TEST_CASE("wedge is graded commutative and d is a derivation") {
    std::mt19937 rng(13);
    for (int it = 0; it < 20; ++it) {
        int da = it % 2 + 1, db = (it / 2) % 2 + 1;
        auto a = testutil::random_form(rng, da, 2, 1);
        auto b = testutil::random_form(rng, db, 2, 1);
        auto ab = a.wedge(b);
        auto ba = b.wedge(a);
        CHECK(ab == (da * db % 2 == 0 ? ba : -ba));
        auto leibniz = a.d().wedge(b) +
                       (da % 2 == 0 ? a.wedge(b.d()) : -(a.wedge(b.d())));
        CHECK(ab.d() == leibniz);
    }
}

TEST_CASE("interior product contracts the first slot") {
    // X -| (dq1 ^ dq2) = X^1 dq2 - X^2 dq1
    TrigForm w = TrigForm::term(2, 0, {0, 1}, TrigPoly::constant(2, 0, 1));
    VectorFieldExpr x = VectorFieldExpr::zero(2, 0);
    x.components[0] = TrigPoly::constant(2, 0, 3);
    x.components[1] = TrigPoly::constant(2, 0, 5);
    TrigForm got = w.interior(x);
    TrigForm expect(1, 2, 0);
    expect.add_term({1}, TrigPoly::constant(2, 0, 3));
    expect.add_term({0}, TrigPoly::constant(2, 0, -5));
    CHECK(got == expect);
}

TEST_CASE("d_eta squares to zero exactly on random forms") {
    std::mt19937 rng(3);
    for (int it = 0; it < 50; ++it) {
        int nq = 1 + it % 2, np = it % 3 == 0 ? 1 : 0;
        auto eta = testutil::random_closed_one_form(rng, nq, np);
        int deg = it % 2;
        auto beta = testutil::random_form(rng, deg, nq, np);
        auto once = d_eta(beta, eta);
        CHECK(d_eta(once, eta).is_zero());
    }
}

TEST_CASE("d_eta of the tautological form on T*_beta S^1") {
    // beta = c dq: eta ^ lambda = c p dq ^ dq = 0, so d_eta lambda = dp ^ dq
    TrigForm beta(1, 1, 0);
    beta.add_term({0}, TrigPoly::constant(1, 0, Rat(3, 2)));
    TrigForm eta = beta.extended(1, 1);
    TrigForm lambda = tautological_form(1);
    TrigForm got = d_eta(lambda, eta);
    TrigForm dpdq(2, 1, 1);
    dpdq.add_term({1, 0}, TrigPoly::constant(1, 1, 1)); // dp ^ dq
    CHECK(got == dpdq);
}

TEST_CASE("eta = 0 reduces d_eta to d") {
    std::mt19937 rng(5);
    TrigForm zero_eta(1, 2, 0);
    for (int it = 0; it < 20; ++it) {
        auto beta = testutil::random_form(rng, it % 3 == 2 ? 2 : 1, 2, 0);
        CHECK(d_eta(beta, zero_eta) == beta.d());
    }
}

TEST_CASE("non-closed eta is a typed error") {
    TrigForm eta(1, 1, 0);
    eta.add_term({0}, TrigPoly::harmonic(1, 0, {1}, true, 1)); // sin(q) dq is closed on S^1
    CHECK_NOTHROW(d_eta(eta, eta));
    TrigForm bad(1, 2, 0);
    bad.add_term({0}, TrigPoly::harmonic(2, 0, {0, 1}, true, 1)); // sin(q2) dq1
    CHECK_THROWS_AS(d_eta(bad, bad), Error);
}

TEST_CASE("truncated exponential is certified") {
    std::mt19937 rng(7);
    for (int it = 0; it < 10; ++it) {
        auto f = testutil::random_poly(rng, 2, 0, 1);
        auto ef = exp_truncated(f, 1e-12, 0.0);
        CHECK(ef.remainder_bound < 1e-12);
        // sample agreement with std::exp
        CompiledPoly cf(f), cs(ef.series);
        for (int k = 0; k < 32; ++k) {
            double q[2] = {2 * M_PI * k / 32.0, 2 * M_PI * ((k * 7) % 32) / 32.0};
            double truth = std::exp(cf.eval(q, nullptr));
            CHECK(std::abs(cs.eval(q, nullptr) - truth) < 1e-11);
        }
    }
}

TEST_CASE("gauge identity holds to 1e-9 on the grid") {
    // d_{eta+df} beta == e^f d_eta(e^{-f} beta), checked with truncated exps
    std::mt19937 rng(11);
    SpaceModel torus2;
    torus2.nq = 2;
    torus2.np = 0;
    for (int it = 0; it < 8; ++it) {
        auto eta = testutil::random_closed_one_form(rng, 2, 0);
        auto beta = testutil::random_form(rng, it % 2 + 1, 2, 0);
        auto f = testutil::random_poly(rng, 2, 0, 1);
        auto ef = exp_truncated(f, 1e-13, 0.0);
        auto emf = exp_truncated(-f, 1e-13, 0.0);
        TrigForm eta_shift = eta + TrigForm::function(f).d();
        TrigForm lhs = d_eta(beta, eta_shift);
        TrigForm rhs_inner = d_eta(beta.scaled_poly(emf.series), eta);
        CHECK(testutil::scaled_difference_residual(lhs, ef.series, rhs_inner, torus2) <
              1e-9);
    }
}

TEST_CASE("grid residual of an exactly-zero form is zero") {
    SpaceModel m;
    m.nq = 1;
    m.np = 1;
    TrigForm z(1, 1, 1);
    CHECK(max_abs_on_grid(z, m) == 0.0);
}
