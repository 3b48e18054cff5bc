#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "lcs/conformal.hpp"
#include "test_util.hpp"

using namespace lcs;

namespace {

TrigForm const_beta(int n, int axis, const Rat& c) {
    TrigForm beta(1, n, 0);
    beta.add_term({axis}, TrigPoly::constant(n, 0, c));
    return beta;
}

ConformalStructure first_kind_torus() {
    // T^2 with eta = -dq1, lambda = dq2, omega = d_eta lambda = dq1 ^ dq2
    SpaceModel space;
    space.nq = 2;
    space.np = 0;
    TrigForm eta = const_beta(2, 0, -1);
    TrigForm lambda = const_beta(2, 1, 1);
    return make_exact_structure(space, eta, d_eta(lambda, eta));
}

double field_grid_distance(const SolvedField& a, const SolvedField& b,
                           const SpaceModel& space) {
    const int d = space.dim();
    std::vector<double> va(d), vb(d);
    double worst = 0;
    for (const auto& x : space.grid()) {
        a.eval(x.data(), va.data());
        b.eval(x.data(), vb.data());
        for (int i = 0; i < d; ++i) worst = std::max(worst, std::abs(va[i] - vb[i]));
    }
    return worst;
}

} // namespace

TEST_CASE("lee field of T*_beta S^1 is c d/dp") {
    SpaceModel base;
    base.nq = 1;
    auto s = cotangent_structure(const_beta(1, 0, Rat(3, 4)), base);
    auto lee = lee_vector_field(s);
    REQUIRE(lee.symbolic.has_value());
    CHECK(lee.symbolic->components[0].is_zero());
    CHECK(lee.symbolic->components[1] == TrigPoly::constant(1, 1, Rat(3, 4)));
}

TEST_CASE("geodesic convention: eta = 0, H = p^2/2 gives p d/dq") {
    SpaceModel base;
    base.nq = 1;
    auto s = cotangent_structure(TrigForm(1, 1, 0), base);
    TrigPoly h = TrigPoly::coordinate_p(1, 1, 0) * TrigPoly::coordinate_p(1, 1, 0);
    auto x = hamiltonian_vector_field(s, h.scaled(Rat(1, 2)));
    REQUIRE(x.symbolic.has_value());
    CHECK(x.symbolic->components[0] == TrigPoly::coordinate_p(1, 1, 0));
    CHECK(x.symbolic->components[1].is_zero());

    auto zero = hamiltonian_vector_field(s, TrigPoly(1, 1));
    CHECK(zero.symbolic->components[0].is_zero());
    CHECK(zero.symbolic->components[1].is_zero());
}

TEST_CASE("lee field on T*_beta T^2 translates the first fiber direction") {
    SpaceModel base;
    base.nq = 2;
    base.q_samples = 16;
    auto s = cotangent_structure(const_beta(2, 0, 1), base);
    auto lee = lee_vector_field(s);
    REQUIRE(lee.symbolic.has_value()); // pfaffian of the model is constant
    CHECK(lee.symbolic->components[0].is_zero());
    CHECK(lee.symbolic->components[1].is_zero());
    CHECK(lee.symbolic->components[2] == TrigPoly::constant(2, 2, 1));
    CHECK(lee.symbolic->components[3].is_zero());
}

TEST_CASE("liouville field of the tautological form is p d/dp") {
    SpaceModel base;
    base.nq = 1;
    auto s = cotangent_structure(const_beta(1, 0, Rat(1, 2)), base);
    auto z = liouville_vector_field(s, tautological_form(1));
    REQUIRE(z.symbolic.has_value());
    CHECK(z.symbolic->components[0].is_zero());
    CHECK(z.symbolic->components[1] == TrigPoly::coordinate_p(1, 1, 0));

    // scaling lambda and omega jointly leaves Z unchanged
    auto s2 = make_exact_structure(s.space, s.eta, s.omega.scaled(2));
    auto z2 = liouville_vector_field(s2, tautological_form(1).scaled(2));
    CHECK(*z2.symbolic == *z.symbolic);

    // lambda = 0 is not a primitive of a nondegenerate omega
    CHECK_THROWS_AS(liouville_vector_field(s, TrigForm(1, 1, 1)), Error);
    try {
        liouville_vector_field(s, TrigForm(1, 1, 1));
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::NotPrimitive);
    }
}

TEST_CASE("gauge transform: identity and nontrivial") {
    SpaceModel base;
    base.nq = 1;
    auto s = cotangent_structure(const_beta(1, 0, 1), base);
    auto id = gauge_transform(s, TrigPoly(1, 0));
    CHECK(id.eta == s.eta);
    CHECK(id.omega == s.omega);

    auto g = gauge_transform(s, TrigPoly::harmonic(1, 0, {1}, false, Rat(1, 2)));
    CHECK(g.closedness == ClosednessCheck::Grid);
    CHECK(g.closedness_residual < 1e-9);
}

TEST_CASE("hamiltonian fields are gauge independent") {
    // X_H for (eta, omega) equals X_{e^f H} for (eta + df, e^f omega)
    SpaceModel base;
    base.nq = 1;
    base.q_samples = 32;
    auto s = cotangent_structure(const_beta(1, 0, 1), base);
    TrigPoly h = TrigPoly::coordinate_p(1, 1, 0) +
                 TrigPoly::harmonic(1, 1, {1}, false, Rat(1, 2));
    auto x = hamiltonian_vector_field(s, h);

    TrigPoly f = TrigPoly::harmonic(1, 0, {1}, false, Rat(1, 3));
    auto gauged = gauge_transform(s, f);
    auto ef = exp_truncated(f.extended(1, 1), 1e-13, gauged.space.p_bound());
    auto x_gauged = hamiltonian_vector_field(gauged, ef.series * h);
    CHECK(field_grid_distance(x, x_gauged, s.space) < 1e-9);
}

TEST_CASE("liouville field is gauge independent") {
    SpaceModel base;
    base.nq = 1;
    auto s = cotangent_structure(const_beta(1, 0, 1), base);
    auto z = liouville_vector_field(s, tautological_form(1));

    TrigPoly f = TrigPoly::harmonic(1, 0, {1}, true, Rat(1, 4));
    auto gauged = gauge_transform(s, f);
    auto ef = exp_truncated(f.extended(1, 1), 1e-13, gauged.space.p_bound());
    auto z2 = liouville_vector_field(gauged, tautological_form(1).scaled_poly(ef.series),
                                     1e-8);
    CHECK(field_grid_distance(z, z2, s.space) < 1e-8);
}

TEST_CASE("structural identities on the cotangent model") {
    SpaceModel base;
    base.nq = 1;
    auto s = cotangent_structure(const_beta(1, 0, 1), base);
    auto rep = structural_identities_report(s, tautological_form(1), 10, 3);
    CHECK(rep.lambda_lee_plus_eta_liouville < 1e-12); // both sides vanish here
    CHECK(rep.omega_pairing_residual < 1e-12);
    CHECK(rep.cartan_exact);
    CHECK(rep.cartan_max_residual < 1e-9);
    CHECK(rep.kernel_criterion_holds);
    CHECK(rep.kind == "none");
}

TEST_CASE("first kind detection on the conformal symplectization model") {
    auto s = first_kind_torus();
    TrigForm lambda = const_beta(2, 1, 1);
    auto rep = structural_identities_report(s, lambda, 5, 4);
    CHECK(rep.kind == "first_kind");
    CHECK(rep.kernel_criterion_holds);
    CHECK(rep.lambda_lee_plus_eta_liouville < 1e-12);
}

TEST_CASE("contactization reeb field") {
    // eta = 0: standard jet space, R = dz
    SpaceModel base;
    base.nq = 1;
    auto s0 = cotangent_structure(TrigForm(1, 1, 0), base);
    auto r0 = contactization_reeb(s0, tautological_form(1));
    CHECK(r0.identities_exact);
    CHECK(r0.reeb.components[0].is_zero());
    CHECK(r0.reeb.components[1].is_zero());
    CHECK(r0.reeb.components[2] == TrigPoly::constant(1, 2, 1));

    // T*_beta S^1: R = dz - c dp
    auto s = cotangent_structure(const_beta(1, 0, Rat(2, 1)), base);
    auto r = contactization_reeb(s, tautological_form(1));
    CHECK(r.identities_exact);
    CHECK(r.alpha_r_residual < 1e-9);
    CHECK(r.dalpha_r_residual < 1e-9);
    CHECK(r.reeb.components[0].is_zero());
    CHECK(r.reeb.components[1] == TrigPoly::constant(1, 2, -2));
    CHECK(r.reeb.components[2] == TrigPoly::constant(1, 2, 1));

    // degenerate d_eta lambda: alpha fails the contact condition
    TrigForm flat = const_beta(1, 0, 1).extended(1, 1); // lambda = dq
    CHECK_THROWS_AS(contactization_reeb(s, flat), Error);
}

TEST_CASE("nondegeneracy failures carry locations") {
    SpaceModel space;
    space.nq = 2;
    space.np = 0;
    TrigForm eta(1, 2, 0);
    // omega = sin(q1) dq1 ^ dq2 vanishes along q1 = 0
    TrigForm omega(2, 2, 0);
    omega.add_term({0, 1}, TrigPoly::harmonic(2, 0, {1, 0}, true, 1));
    CHECK_THROWS_AS(make_exact_structure(space, eta, omega), Error);
}
