// Acceptance suite: one pass/fail line per criterion, nonzero exit when any
// criterion fails. Tolerances are fixed here, not configurable.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "lcs/flow.hpp"
#include "lcs/genfam.hpp"
#include "lcs/moser.hpp"
#include "lcs/novikov.hpp"
#include "oracles.hpp"
#include "test_util.hpp"

using namespace lcs;

namespace {

int failures = 0;

void report(int number, const std::string& name, bool pass, const std::string& detail) {
    std::printf("[%s] %2d. %s%s%s\n", pass ? "PASS" : "FAIL", number, name.c_str(),
                detail.empty() ? "" : " -- ", detail.c_str());
    if (!pass) ++failures;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

Cocycle zeros(const CellComplex& c) {
    Cocycle z;
    z.edge_values.assign(c.cells(1), 0);
    return z;
}

TrigForm const_beta(int n, int axis, const Rat& c) {
    TrigForm beta(1, n, 0);
    beta.add_term({axis}, TrigPoly::constant(n, 0, c));
    return beta;
}

GeneratingFamily two_plus_cos() {
    return GeneratingFamily(1, 0, {}, 0.0,
                            {{{0}, false, 2.0, {}}, {{1}, false, 1.0, {}}});
}

GeneratingFamily bump_family(double quad_sign = 1.0, double core = 0.3) {
    return GeneratingFamily(1, 1, {{quad_sign}}, 1.0, {{{1}, false, core, {0}}});
}

GeneratingFamily product_morse_t2() {
    return GeneratingFamily(
        2, 0, {}, 0.0,
        {{{0, 0}, false, 3.0, {}}, {{1, 0}, false, 1.0, {}}, {{0, 1}, false, 1.0, {}}});
}

// the family/beta configurations every family-level criterion runs over;
// seed counts are configured per family (zeros here are far apart), the
// verification tolerances are fixed in the criteria
struct TestFamily {
    std::string name;
    std::shared_ptr<GeneratingFamily> family;
    TrigForm beta;
    double epsilon;
    SearchOptions opts;
};

std::vector<TestFamily> test_families() {
    SearchOptions circle_opts;
    SearchOptions torus_opts;
    torus_opts.q_seeds = 24;
    torus_opts.xi_seeds = 9;
    std::vector<TestFamily> fams;
    fams.push_back({"S1:2+cos,b=0.1", std::make_shared<GeneratingFamily>(two_plus_cos()),
                    const_beta(1, 0, Rat(1, 10)), 0.5, circle_opts});
    fams.push_back({"S1:2+cos,b=0", std::make_shared<GeneratingFamily>(two_plus_cos()),
                    TrigForm(1, 1, 0), 0.5, circle_opts});
    fams.push_back({"S1:bump,b=0.1", std::make_shared<GeneratingFamily>(bump_family()),
                    const_beta(1, 0, Rat(1, 10)), 0.1, circle_opts});
    fams.push_back({"S1:-bump,b=0.1",
                    std::make_shared<GeneratingFamily>(bump_family(-1.0, -0.3)),
                    const_beta(1, 0, Rat(1, 10)), 0.1, circle_opts});
    fams.push_back({"T2:morse,b=0", std::make_shared<GeneratingFamily>(product_morse_t2()),
                    TrigForm(1, 2, 0), 0.5, torus_opts});
    fams.push_back({"T2:morse,b=0.1dq1",
                    std::make_shared<GeneratingFamily>(product_morse_t2()),
                    const_beta(2, 0, Rat(1, 10)), 0.5, torus_opts});
    return fams;
}

void criterion_1() {
    bool pass = true;
    std::string detail;
    auto timed = [&](const std::string& what, const CellComplex& c, const Cocycle& e,
                     Field f, std::vector<int> expect) {
        auto t0 = std::chrono::steady_clock::now();
        auto b = novikov_betti(c, e, f);
        double dt = seconds_since(t0);
        if (b.betti != expect || dt >= 1.0) {
            pass = false;
            detail += what + " failed; ";
        }
    };
    auto s1 = complexes::circle();
    timed("S1 class 0", s1, zeros(s1), Field::Rationals, {1, 1});
    timed("S1 class 1", s1, Cocycle{{1}}, Field::Rationals, {0, 0});
    timed("S1 class 3", s1, Cocycle{{3}}, Field::Rationals, {0, 0});
    auto t2 = complexes::torus();
    timed("T2 class 0", t2, zeros(t2), Field::Rationals, {1, 2, 1});
    timed("T2 class (1,0)", t2, Cocycle{{1, 0}}, Field::Rationals, {0, 0, 0});
    auto kb = complexes::klein_bottle();
    timed("Klein class 0 over F2", kb, zeros(kb), Field::GF2, {1, 2, 1});
    report(1, "Novikov ranks on the reference complexes", pass, detail);
}

void criterion_2() {
    bool pass = true;
    std::string detail;
    auto check = [&](const std::string& what, const CellComplex& c, const Cocycle& e,
                     Field f) {
        if (!verify_duality(c, e, f)) {
            pass = false;
            detail += what + " not symmetric; ";
        }
    };
    auto t2 = complexes::torus();
    check("T2 (1,0)/Q", t2, Cocycle{{1, 0}}, Field::Rationals);
    check("T2 0/Q", t2, zeros(t2), Field::Rationals);
    check("T2 (2,-1)/F2", t2, Cocycle{{2, -1}}, Field::GF2);
    auto kb = complexes::klein_bottle();
    check("Klein 0/F2", kb, zeros(kb), Field::GF2);
    check("Klein (0,3)/F2", kb, Cocycle{{0, 3}}, Field::GF2);
    auto t3 = complexes::torus3();
    check("T3 (1,0,0)/Q", t3, Cocycle{{1, 0, 0}}, Field::Rationals);
    check("T3 0/Q", t3, zeros(t3), Field::Rationals);
    auto prod = complexes::product_1d(complexes::circle(3), complexes::circle(2));
    check("subdivided T2/Q", prod,
          complexes::product_cocycle(complexes::circle(3), complexes::circle(2),
                                     Cocycle{{1, 0, -1}}, Cocycle{{0, 0}}),
          Field::Rationals);
    report(2, "duality b_k = b_{n-k} on closed manifolds", pass, detail);
}

void criterion_3() {
    std::mt19937 rng(2026);
    bool square_zero = true;
    for (int it = 0; it < 200; ++it) {
        int nq = 1 + it % 2, np = it % 4 == 0 ? 1 : 0;
        int deg = it % 3 == 2 && nq + np >= 2 ? 2 : it % 3 == 1 ? 0 : 1;
        auto eta = testutil::random_closed_one_form(rng, nq, np);
        auto beta = testutil::random_form(rng, deg, nq, np);
        if (!d_eta(d_eta(beta, eta), eta).is_zero()) square_zero = false;
    }

    SpaceModel torus2;
    torus2.nq = 2;
    double gauge_res = 0;
    for (int it = 0; it < 10; ++it) {
        auto eta = testutil::random_closed_one_form(rng, 2, 0);
        auto beta = testutil::random_form(rng, it % 2 + 1, 2, 0);
        auto f = testutil::random_poly(rng, 2, 0, 1);
        auto ef = exp_truncated(f, 1e-12, 0.0);
        auto emf = exp_truncated(-f, 1e-12, 0.0);
        TrigForm lhs = d_eta(beta, eta + TrigForm::function(f).d());
        TrigForm rhs_inner = d_eta(beta.scaled_poly(emf.series), eta);
        gauge_res = std::max(gauge_res, testutil::scaled_difference_residual(
                                            lhs, ef.series, rhs_inner, torus2));
    }

    SpaceModel base;
    base.nq = 1;
    auto s = cotangent_structure(const_beta(1, 0, 1), base);
    auto rep = structural_identities_report(s, tautological_form(1), 30, 7);

    bool pass = square_zero && gauge_res < 1e-9 && rep.cartan_max_residual < 1e-9;
    char buf[160];
    std::snprintf(buf, sizeof(buf),
                  "d_eta^2 %s; gauge residual %.2e; cartan residual %.2e",
                  square_zero ? "exact" : "NONZERO", gauge_res,
                  rep.cartan_max_residual);
    report(3, "d_eta^2 = 0 (200 cases), gauge and Cartan identities < 1e-9", pass, buf);
}

void criterion_4() {
    bool pass = true;
    double worst = 0;
    for (int n : {1, 2}) {
        auto rep = displaceability_check(const_beta(n, 0, 1), 1.0, 100, n == 1 ? 16 : 8);
        for (const auto& s : rep.samples) {
            double err = std::abs(s.min_distance - s.t);
            bool wanted = std::abs(s.t - 0.01) < 1e-12 || std::abs(s.t - 0.1) < 1e-12 ||
                          std::abs(s.t - 1.0) < 1e-12;
            if (wanted) {
                worst = std::max(worst, err);
                if (err >= 1e-10 || s.min_distance <= 0) pass = false;
            }
        }
    }
    char buf[96];
    std::snprintf(buf, sizeof(buf), "max |distance - t| = %.2e at t in {0.01, 0.1, 1}",
                  worst);
    report(4, "Lee-field displaceability distance equals t", pass, buf);
}

void criterion_5() {
    auto t0 = std::chrono::steady_clock::now();
    MoserProblem prob;
    prob.space.nq = 2;
    prob.space.q_samples = 32;
    prob.eta = const_beta(2, 0, 1);
    prob.lambda0 = const_beta(2, 1, -1);
    prob.lambda1 =
        prob.lambda0 + TrigForm::term(2, 0, {1},
                                      TrigPoly::harmonic(2, 0, {1, 0}, true, Rat(1, 10)));
    double residuals[3];
    int level = 0;
    for (double dt : {4e-3, 2e-3, 1e-3}) {
        MoserOptions opts;
        opts.dt = dt;
        opts.fd_step = dt;
        residuals[level++] = moser_flow(prob, opts).max_residual;
    }
    double elapsed = seconds_since(t0);
    bool monotone = residuals[0] > residuals[1] && residuals[1] > residuals[2];
    bool pass = residuals[2] < 1e-5 && monotone && elapsed < 30.0;
    char buf[160];
    std::snprintf(buf, sizeof(buf),
                  "residuals %.2e > %.2e > %.2e at dt {4,2,1}e-3; %.1f s", residuals[0],
                  residuals[1], residuals[2], elapsed);
    report(5, "Moser pullback residual < 1e-5, monotone refinement, < 30 s", pass, buf);
}

void criterion_6() {
    auto fam = two_plus_cos();
    BetaField b01(const_beta(1, 0, Rat(1, 10)));
    BetaField b2(const_beta(1, 0, Rat(2)));
    auto r01 = beta_critical_points(fam, b01);
    auto r2 = beta_critical_points(fam, b2);

    // interval-arithmetic oracle: -sin t - 2(2 + cos t) never vanishes
    bool interval_empty = true;
    const int pieces = 1024;
    for (int i = 0; i < pieces; ++i) {
        oracle::Interval th{2 * M_PI * i / pieces, 2 * M_PI * (i + 1) / pieces};
        auto g = (oracle::interval_sin(1, th) * -1.0) -
                 ((oracle::interval_cos(1, th) + oracle::Interval{2, 2}) * 2.0);
        if (g.contains_zero()) interval_empty = false;
    }
    // bisection oracle for the 0.1 case
    auto roots = oracle::bisect_roots(
        [](double t) { return -std::sin(t) - 0.1 * (2 + std::cos(t)); }, 0, 2 * M_PI);

    bool geometric = true;
    std::string geo_detail;
    for (const auto& tf : test_families()) {
        BetaField bf(tf.beta);
        try {
            auto lag = lagrangian_from_family(*tf.family, bf, tf.opts);
            if (lag.intersection_count != lag.beta_critical_count) geometric = false;
        } catch (const Error&) {
            geometric = false;
            geo_detail += tf.name + " mismatched; ";
        }
    }

    bool pass = r01.points.size() == 2 && r2.points.empty() && interval_empty &&
                roots.size() == 2 && geometric;
    char buf[200];
    std::snprintf(buf, sizeof(buf),
                  "counts %zu/%zu (oracle %zu/%s); geometric route %s %s",
                  r01.points.size(), r2.points.size(), roots.size(),
                  interval_empty ? "empty" : "NONEMPTY",
                  geometric ? "agrees" : "DISAGREES", geo_detail.c_str());
    report(6, "generating-family counts with oracle agreement", pass, buf);
}

void criterion_7() {
    bool pass = true;
    std::string detail;
    for (const auto& tf : test_families()) {
        BetaField bf(tf.beta);
        try {
            auto art = build_pipeline(*tf.family, bf, tf.epsilon, 0.1, tf.opts);
            if (!art.bijection_ok || art.max_pairing_distance >= 1e-6) {
                pass = false;
                detail += tf.name + " pairing failed; ";
            }
        } catch (const Error& e) {
            pass = false;
            detail += tf.name + ": " + e.what() + "; ";
        }
    }
    report(7, "gamma zeros on X+ u X- pair with d_beta F zeros (< 1e-6)", pass, detail);
}

void criterion_8() {
    struct Config {
        std::string name;
        GeneratingFamily family;
        TrigForm beta;
        CellComplex complex;
        int count, rank;
    };
    std::vector<Config> configs;
    configs.push_back({"S1 b=0", two_plus_cos(), TrigForm(1, 1, 0), complexes::circle(),
                       2, 2});
    configs.push_back({"S1 b=2dq", two_plus_cos(), const_beta(1, 0, Rat(2)),
                       complexes::circle(), 0, 0});
    configs.push_back({"T2 b=0", product_morse_t2(), TrigForm(1, 2, 0),
                       complexes::torus(), 4, 4});
    bool pass = true;
    std::string detail;
    for (auto& cfg : configs) {
        auto rep = theorem_bound_report(cfg.family, cfg.beta, cfg.complex, std::nullopt,
                                        Field::Rationals);
        if (!rep.satisfied || rep.count != cfg.count || rep.rank != cfg.rank) {
            pass = false;
            detail += cfg.name + " mismatched; ";
        }
    }
    report(8, "intersection bound holds on the reference configurations", pass, detail);
}

void criterion_9() {
    std::mt19937 rng(2027);
    std::uniform_int_distribution<int> period_d(-2, 2), coeff_d(-3, 3);
    int done = 0, agreed = 0;
    while (done < 20) {
        long period = period_d(rng);
        TrigPoly f(1, 0);
        if (period != 0)
            f = f + TrigPoly::constant(
                        1, 0, Rat((period > 0 ? 1 : -1) * (std::abs(coeff_d(rng)) % 3 + 1)));
        for (int k = 1; k <= 3; ++k) {
            f = f + TrigPoly::harmonic(1, 0, {k}, false, Rat(coeff_d(rng), 2));
            f = f + TrigPoly::harmonic(1, 0, {k}, true, Rat(coeff_d(rng), 2));
        }
        try {
            auto r = circle_morse_novikov(f, period);
            ++done;
            if (r.betti == r.subdivision_betti) ++agreed;
        } catch (const Error&) {
            continue; // degenerate draw, resample
        }
    }
    char buf[96];
    std::snprintf(buf, sizeof(buf), "%d/20 randomized forms agreed", agreed);
    report(9, "circle Morse-Novikov matches the subdivision complex", agreed == 20, buf);
}

void criterion_10() {
    bool pass = true;
    std::string detail;
    TrigPoly f = TrigPoly::harmonic(1, 0, {1}, false, Rat(3, 10));
    for (const auto& tf : test_families()) {
        BetaField bf(tf.beta);
        auto base = beta_critical_points(*tf.family, bf, tf.opts);
        for (int sign : {1, -1}) {
            StabilizedFamily stab(*tf.family, sign);
            auto stabbed = beta_critical_points(stab, bf, tf.opts);
            if (stabbed.points.size() != base.points.size()) {
                pass = false;
                detail += tf.name + " stabilization changed the count; ";
            }
        }
        TrigPoly fn = tf.family->n() == 1 ? f : f.extended(tf.family->n(), 0);
        GaugedFamily gauged(*tf.family, fn);
        BetaField shifted(tf.beta + TrigForm::function(fn).d());
        auto moved = beta_critical_points(gauged, shifted, tf.opts);
        if (moved.points.size() != base.points.size()) {
            pass = false;
            detail += tf.name + " gauge changed the count; ";
        }
    }
    report(10, "stabilization and gauge invariance of the counts", pass, detail);
}

} // namespace

int main() {
    std::printf("lcs-lab acceptance suite\n");
    std::vector<std::function<void()>> criteria = {
        criterion_1, criterion_2, criterion_3, criterion_4, criterion_5,
        criterion_6, criterion_7, criterion_8, criterion_9, criterion_10};
    for (auto& c : criteria) {
        auto t0 = std::chrono::steady_clock::now();
        c();
        std::printf("       (%.1f s)\n", seconds_since(t0));
        std::fflush(stdout);
    }
    if (failures == 0) std::printf("all criteria passed\n");
    else std::printf("%d criteria FAILED\n", failures);
    return failures == 0 ? 0 : 1;
}
