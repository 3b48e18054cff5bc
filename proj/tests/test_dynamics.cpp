#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "lcs/flow.hpp"
#include "lcs/moser.hpp"

using namespace lcs;

namespace {

TrigForm const_beta(int n, int axis, const Rat& c) {
    TrigForm beta(1, n, 0);
    beta.add_term({axis}, TrigPoly::constant(n, 0, c));
    return beta;
}

MoserProblem t2_problem(double pert) {
    // eta = dq1, omega_0 = dq1 ^ dq2 = d_eta(-dq2), lambda_1 adds pert sin(q1) dq2
    MoserProblem prob;
    prob.space.nq = 2;
    prob.space.np = 0;
    prob.space.q_samples = 8;
    prob.eta = const_beta(2, 0, 1);
    prob.lambda0 = const_beta(2, 1, -1);
    long num = std::lround(pert * 100);
    prob.lambda1 = prob.lambda0 +
                   TrigForm::term(2, 0, {1}, TrigPoly::harmonic(2, 0, {1, 0}, true,
                                                                Rat(num, 100)));
    return prob;
}

} // namespace

TEST_CASE("zero field gives constant trajectories") {
    FlowConfig cfg;
    cfg.field.dim = 2;
    cfg.field.f = [](double, const double*, double* dx) { dx[0] = dx[1] = 0; };
    cfg.t_end = 1.0;
    cfg.dt = 0.01;
    cfg.nq = 1;
    cfg.seeds = {{0.3, 0.7}};
    auto trajs = integrate_flow(cfg);
    REQUIRE(trajs.size() == 1);
    CHECK(!trajs[0].exited_box);
    CHECK(trajs[0].states.back()[0] == 0.3);
    CHECK(trajs[0].states.back()[1] == 0.7);
}

TEST_CASE("lee flow integrates the linear fiber translation exactly") {
    SpaceModel base;
    base.nq = 1;
    auto s = cotangent_structure(const_beta(1, 0, 1), base);
    FlowConfig cfg;
    cfg.field = ode_from(lee_vector_field(s));
    cfg.t_end = 1.0;
    cfg.dt = 1e-2;
    cfg.nq = 1;
    cfg.seeds = {{0.5, 0.25}};
    auto trajs = integrate_flow(cfg);
    CHECK(std::abs(trajs[0].states.back()[1] - 1.25) < 1e-12);
    CHECK(std::abs(trajs[0].states.back()[0] - 0.5) < 1e-12);
}

TEST_CASE("rk4 is fourth order on a nonlinear field") {
    // logistic dp/dt = p - p^2, p(0) = 1/2, p(t) = 1/(1 + e^-t)
    OdeField f;
    f.dim = 1;
    f.f = [](double, const double* x, double* dx) { dx[0] = x[0] - x[0] * x[0]; };
    auto endpoint_error = [&](double dt) {
        std::vector<double> x{0.5};
        long steps = std::lround(2.0 / dt);
        for (long s = 0; s < steps; ++s) rk4_step(f, s * dt, dt, x);
        return std::abs(x[0] - 1.0 / (1.0 + std::exp(-2.0)));
    };
    double e1 = endpoint_error(0.05);
    double e2 = endpoint_error(0.025);
    double ratio = e1 / e2;
    CHECK(ratio > 14.0);
    CHECK(ratio < 18.0);
}

TEST_CASE("trajectories leaving the p-box are flagged") {
    OdeField f;
    f.dim = 2;
    f.f = [](double, const double*, double* dx) {
        dx[0] = 0;
        dx[1] = 1;
    };
    FlowConfig cfg;
    cfg.field = f;
    cfg.t_end = 2.0;
    cfg.dt = 0.01;
    cfg.nq = 1;
    cfg.p_min = -4;
    cfg.p_max = 4;
    cfg.seeds = {{0.0, 3.5}};
    auto trajs = integrate_flow(cfg);
    CHECK(trajs[0].exited_box);
    CHECK(trajs[0].times.back() < 2.0);
}

TEST_CASE("displaceability of the zero section under the lee flow") {
    auto rep = displaceability_check(const_beta(1, 0, 1), 1.0, 100, 16);
    REQUIRE(rep.samples.size() == 100);
    for (std::size_t i = 0; i < rep.samples.size(); ++i) {
        const auto& s = rep.samples[i];
        CHECK(s.min_distance > 0.0);
        CHECK(std::abs(s.min_distance - s.t) < 1e-10);
        if (i > 0) CHECK(s.min_distance > rep.samples[i - 1].min_distance);
    }
    CHECK(std::abs(rep.overall_min - 0.01) < 1e-10);

    auto rep2 = displaceability_check(const_beta(2, 0, 1), 0.5, 10, 8);
    for (const auto& s : rep2.samples) CHECK(std::abs(s.min_distance - s.t) < 1e-10);
}

TEST_CASE("vanishing beta violates the displaceability hypothesis") {
    TrigForm beta(1, 1, 0);
    beta.add_term({0}, TrigPoly::harmonic(1, 0, {1}, true, 1)); // sin q dq
    CHECK_THROWS_AS(displaceability_check(beta, 1.0, 10), Error);
    try {
        displaceability_check(beta, 1.0, 10);
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::Precondition);
    }
}

TEST_CASE("moser flow on the identity path is trivial") {
    auto prob = t2_problem(0.0);
    MoserOptions opts;
    opts.dt = 1e-2;
    auto rep = moser_flow(prob, opts);
    CHECK(rep.max_residual < 1e-10);
    for (const auto& s : rep.seeds) {
        CHECK(std::abs(s.f_end) < 1e-12);
        for (std::size_t i = 0; i < s.start.size(); ++i)
            CHECK(std::abs(s.start[i] - s.end[i]) < 1e-12);
    }
}

TEST_CASE("moser residual is small and the defining solve is linear") {
    auto prob = t2_problem(0.1);
    MoserOptions opts;
    opts.dt = 2e-3;
    opts.fd_step = 2e-3;
    auto rep = moser_flow(prob, opts);
    CHECK(rep.max_residual < 1e-4);
    CHECK(rep.max_residual > 0.0);

    // negating the perturbation negates X at t = 0
    auto neg = t2_problem(-0.1);
    auto f_pos = moser_field(prob);
    auto f_neg = moser_field(neg);
    double x[3] = {1.0, 2.0, 0.0};
    double dp[3], dn[3];
    f_pos.f(0.0, x, dp);
    f_neg.f(0.0, x, dn);
    for (int i = 0; i < 2; ++i) CHECK(std::abs(dp[i] + dn[i]) < 1e-14);
}

TEST_CASE("moser residual decreases under refinement") {
    auto prob = t2_problem(0.1);
    prob.space.q_samples = 4;
    double last = std::numeric_limits<double>::infinity();
    for (double dt : {8e-3, 4e-3, 2e-3}) {
        MoserOptions opts;
        opts.dt = dt;
        opts.fd_step = dt;
        auto rep = moser_flow(prob, opts);
        CHECK(rep.max_residual < last);
        last = rep.max_residual;
    }
}

TEST_CASE("degenerate paths are typed errors with location") {
    auto prob = t2_problem(0.0);
    // big perturbation drives omega_t through zero somewhere on the path
    prob.lambda1 = prob.lambda0 +
                   TrigForm::term(2, 0, {1}, TrigPoly::harmonic(2, 0, {1, 0}, true, 2));
    MoserOptions opts;
    opts.dt = 1e-2;
    CHECK_THROWS_AS(moser_flow(prob, opts), Error);
    try {
        moser_flow(prob, opts);
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::NondegeneracyLost);
        CHECK(std::string(e.what()).find("t = ") != std::string::npos);
    }
}

TEST_CASE("gauge related hamiltonian flows agree") {
    SpaceModel base;
    base.nq = 1;
    base.q_samples = 8;
    auto s = cotangent_structure(const_beta(1, 0, 1), base);
    TrigPoly h = TrigPoly::coordinate_p(1, 1, 0) +
                 TrigPoly::harmonic(1, 1, {1}, false, Rat(1, 2));
    TrigPoly f = TrigPoly::harmonic(1, 0, {1}, false, Rat(1, 3));
    auto gauged = gauge_transform(s, f);
    auto ef = exp_truncated(f.extended(1, 1), 1e-13, gauged.space.p_bound());

    FlowConfig cfg;
    cfg.field = ode_from(hamiltonian_vector_field(s, h));
    cfg.t_end = 1.0;
    cfg.dt = 1e-3;
    cfg.nq = 1;
    cfg.seeds = {{0.3, 0.2}, {2.0, -0.5}, {4.4, 1.0}};
    auto a = integrate_flow(cfg);
    cfg.field = ode_from(hamiltonian_vector_field(gauged, ef.series * h));
    auto b = integrate_flow(cfg);
    for (std::size_t k = 0; k < a.size(); ++k) {
        REQUIRE(a[k].states.size() == b[k].states.size());
        for (int i = 0; i < 2; ++i)
            CHECK(std::abs(a[k].states.back()[i] - b[k].states.back()[i]) < 1e-6);
    }
}
