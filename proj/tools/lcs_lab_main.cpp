// lcs-lab: batch CLI over the conformal symplectic toolkit. Every subcommand
// reads file/flag inputs, writes one JSON report (stdout and/or --out), and
// is deterministic for a fixed configuration. Exit codes: 0 success, 2 typed
// precondition errors (machine-readable JSON on stdout), 1 internal failure,
// 64 usage errors.

#include <CLI11.hpp>
#include <fstream>
#include <iostream>

#include "lcs/flow.hpp"
#include "lcs/genfam.hpp"
#include "lcs/json_io.hpp"
#include "lcs/moser.hpp"
#include "lcs/novikov.hpp"

namespace {

using lcs::json;

constexpr const char* kBetaGrammar =
    "one-form   = [\"-\"] term { (\"+\"|\"-\") term } ;\n"
    "term       = [ number ] [ trig ] \"dq\" [ integer ] ;\n"
    "trig       = (\"cos\"|\"sin\") \"(\" phase \")\" ;\n"
    "phase      = [\"-\"] pterm { (\"+\"|\"-\") pterm } ;\n"
    "pterm      = [ integer ] \"q\" [ integer ] ;\n"
    "number     = integer [ \"/\" integer ] | decimal ;\n"
    "examples: \"dq1\", \"0.1 dq\", \"2 dq1 - 1/3 sin(q1+2q2) dq2\"";

void emit(const json& report, const std::string& out_path) {
    if (!out_path.empty()) lcs::write_json_file(out_path, report);
    std::cout << report.dump(2) << "\n";
}

lcs::Field parse_field(const std::string& name) {
    if (name == "Q" || name == "q") return lcs::Field::Rationals;
    if (name == "F2" || name == "f2" || name == "Z2") return lcs::Field::GF2;
    throw lcs::Error(lcs::ErrorKind::Parse, "unknown field: " + name + " (use Q or F2)");
}

json point_to_json(const lcs::BetaCriticalPoint& p) {
    return json{{"q", p.q},           {"xi", p.xi},
                {"F", p.f_value},     {"residual", p.residual},
                {"region", lcs::region_name(p.region)},
                {"index", p.index},   {"transversal", p.transversal}};
}

void write_trajectory_csv(const std::string& path,
                          const std::vector<lcs::Trajectory>& trajs, int nq, int np,
                          bool with_f) {
    std::ofstream out(path);
    if (!out) throw lcs::Error(lcs::ErrorKind::Io, "cannot write " + path);
    out << "seed,t";
    for (int i = 0; i < nq; ++i) out << ",q" << i + 1;
    for (int i = 0; i < np; ++i) out << ",p" << i + 1;
    if (with_f) out << ",f_t";
    out << "\n";
    out.precision(17);
    for (std::size_t s = 0; s < trajs.size(); ++s)
        for (std::size_t k = 0; k < trajs[s].times.size(); ++k) {
            out << s << "," << trajs[s].times[k];
            const auto& x = trajs[s].states[k];
            int cols = nq + np + (with_f ? 1 : 0);
            for (int i = 0; i < cols; ++i) out << "," << x[i];
            out << "\n";
        }
}

int run(int argc, char** argv) {
    CLI::App app{"lcs-lab: Novikov homology, conformal calculus, Moser flows and "
                 "generating families on tori"};
    app.require_subcommand(1);
    std::string out_path;

    // novikov-betti
    auto* betti_cmd = app.add_subcommand("novikov-betti",
                                         "Novikov Betti numbers of (complex, cocycle)");
    std::string complex_path, cocycle_path, field_name = "Q";
    unsigned tree_seed = 0;
    betti_cmd->add_option("--complex", complex_path)->required();
    betti_cmd->add_option("--cocycle", cocycle_path)->required();
    betti_cmd->add_option("--field", field_name, "Q or F2");
    betti_cmd->add_option("--tree-seed", tree_seed, "spanning tree randomization");
    betti_cmd->add_option("--out", out_path);

    // duality-check
    auto* dual_cmd = app.add_subcommand("duality-check", "b_k == b_{n-k} test");
    dual_cmd->add_option("--complex", complex_path)->required();
    dual_cmd->add_option("--cocycle", cocycle_path)->required();
    dual_cmd->add_option("--field", field_name);
    dual_cmd->add_option("--out", out_path);

    // identities
    auto* ident_cmd = app.add_subcommand(
        "identities", "structural identity residuals for a named model");
    std::string model = "cotangent", beta_expr;
    int ident_cases = 20;
    int grid = 32, psamples = 5;
    ident_cmd->add_option("--model", model, "cotangent or first-kind");
    ident_cmd->add_option("--beta", beta_expr, kBetaGrammar);
    ident_cmd->add_option("--cases", ident_cases, "random Cartan draws");
    ident_cmd->add_option("--grid", grid);
    ident_cmd->add_option("--psamples", psamples);
    ident_cmd->add_option("--out", out_path);

    // moser
    auto* moser_cmd = app.add_subcommand("moser", "Moser flow residual report");
    std::string eta_expr, l0_expr, l1_expr, csv_path;
    double dt = 1e-3, fd_step = 1e-3;
    moser_cmd->add_option("--eta", eta_expr, kBetaGrammar)->required();
    moser_cmd->add_option("--lambda0", l0_expr)->required();
    moser_cmd->add_option("--lambda1", l1_expr)->required();
    moser_cmd->add_option("--dt", dt);
    moser_cmd->add_option("--fd-step", fd_step);
    moser_cmd->add_option("--grid", grid, "seed grid per circle");
    moser_cmd->add_option("--csv", csv_path, "trajectory CSV (t, q..., f_t)");
    moser_cmd->add_option("--out", out_path);

    // displace
    auto* disp_cmd = app.add_subcommand(
        "displace", "fiber distance of the Lee flow from the zero section");
    double tmax = 1.0;
    int samples = 100;
    disp_cmd->add_option("--beta", beta_expr, kBetaGrammar)->required();
    disp_cmd->add_option("--tmax", tmax);
    disp_cmd->add_option("--samples", samples);
    disp_cmd->add_option("--grid", grid, "base-point grid per circle");
    disp_cmd->add_option("--dt", dt);
    disp_cmd->add_option("--csv", csv_path, "trajectory CSV (t, q..., p...)");
    disp_cmd->add_option("--out", out_path);

    // gf-critical
    auto* gf_cmd = app.add_subcommand("gf-critical",
                                      "beta-critical points of a generating family");
    std::string family_path;
    double epsilon = 0.0, tol = 1e-10, dedup = 1e-4;
    int qseeds = 64, xiseeds = 33;
    gf_cmd->add_option("--family", family_path)->required();
    gf_cmd->add_option("--beta", beta_expr, kBetaGrammar)->required();
    gf_cmd->add_option("--epsilon", epsilon, "region tagging threshold");
    gf_cmd->add_option("--tol", tol);
    gf_cmd->add_option("--dedup", dedup);
    gf_cmd->add_option("--qseeds", qseeds);
    gf_cmd->add_option("--xiseeds", xiseeds);
    gf_cmd->add_option("--out", out_path);

    // theorem-check
    auto* thm_cmd = app.add_subcommand(
        "theorem-check", "compare the beta-critical count with the Novikov rank");
    thm_cmd->add_option("--family", family_path)->required();
    thm_cmd->add_option("--beta", beta_expr, kBetaGrammar)->required();
    thm_cmd->add_option("--complex", complex_path)->required();
    thm_cmd->add_option("--cocycle", cocycle_path, "defaults to the class of beta");
    thm_cmd->add_option("--field", field_name);
    thm_cmd->add_option("--qseeds", qseeds);
    thm_cmd->add_option("--xiseeds", xiseeds);
    thm_cmd->add_option("--out", out_path);

    // circle-mn
    auto* mn_cmd = app.add_subcommand(
        "circle-mn", "exact Morse-Novikov complex of f(theta) dtheta on the circle");
    std::string f_expr;
    long period = 0;
    mn_cmd->add_option("--f", f_expr, "scalar trig polynomial, e.g. \"sin(q)\"")
        ->required();
    mn_cmd->add_option("--period", period, "integral of eta over the circle")
        ->required();
    mn_cmd->add_option("--out", out_path);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << app.help() << "\n";
        std::cerr << "error: " << e.what() << "\n";
        return 64;
    }

    try {
        if (*betti_cmd || *dual_cmd) {
            auto complex = lcs::complex_from_json(lcs::load_json_file(complex_path));
            auto cocycle = lcs::cocycle_from_json(lcs::load_json_file(cocycle_path));
            auto field = parse_field(field_name);
            if (*betti_cmd) {
                auto betti =
                    lcs::novikov_betti(complex, cocycle, field, {tree_seed});
                emit(lcs::betti_to_json(betti), out_path);
            } else {
                bool dual = lcs::verify_duality(complex, cocycle, field);
                auto betti = lcs::novikov_betti(complex, cocycle, field);
                json rep = lcs::betti_to_json(betti);
                rep["duality"] = dual;
                emit(rep, out_path);
            }
        } else if (*ident_cmd) {
            lcs::ConformalStructure s;
            lcs::TrigForm lambda;
            if (model == "cotangent") {
                if (beta_expr.empty())
                    throw lcs::Error(lcs::ErrorKind::Precondition,
                                     "--beta is required for the cotangent model");
                auto beta = lcs::parse_one_form(beta_expr);
                lcs::SpaceModel base;
                base.nq = beta.nq();
                base.q_samples = grid;
                base.p_samples = psamples;
                s = lcs::cotangent_structure(beta, base);
                lambda = lcs::tautological_form(beta.nq());
            } else if (model == "first-kind") {
                lcs::SpaceModel space;
                space.nq = 2;
                space.q_samples = grid;
                lcs::TrigForm eta(1, 2, 0), lam(1, 2, 0);
                eta.add_term({0}, lcs::TrigPoly::constant(2, 0, -1));
                lam.add_term({1}, lcs::TrigPoly::constant(2, 0, 1));
                s = lcs::make_exact_structure(space, eta, lcs::d_eta(lam, eta));
                lambda = lam;
            } else {
                throw lcs::Error(lcs::ErrorKind::Precondition,
                                 "unknown model: " + model);
            }
            auto rep = lcs::structural_identities_report(s, lambda, ident_cases, 1);
            json out{{"schema", lcs::kSchemaTag},
                     {"model", model},
                     {"lambda_lee_plus_eta_liouville", rep.lambda_lee_plus_eta_liouville},
                     {"omega_pairing_residual", rep.omega_pairing_residual},
                     {"cartan_exact", rep.cartan_exact},
                     {"cartan_max_residual", rep.cartan_max_residual},
                     {"kernel_criterion_holds", rep.kernel_criterion_holds},
                     {"kernel_mismatches", rep.kernel_mismatches},
                     {"kind", rep.kind}};
            emit(out, out_path);
        } else if (*moser_cmd) {
            lcs::MoserProblem prob;
            prob.eta = lcs::parse_one_form(eta_expr);
            int n = prob.eta.nq();
            prob.lambda0 = lcs::parse_one_form(l0_expr, n);
            prob.lambda1 = lcs::parse_one_form(l1_expr, n);
            n = std::max({n, prob.lambda0.nq(), prob.lambda1.nq()});
            prob.eta = prob.eta.extended(n, 0);
            prob.lambda0 = prob.lambda0.extended(n, 0);
            prob.lambda1 = prob.lambda1.extended(n, 0);
            prob.space.nq = n;
            prob.space.q_samples = grid;
            lcs::MoserOptions opts;
            opts.dt = dt;
            opts.fd_step = fd_step;
            auto rep = lcs::moser_flow(prob, opts);
            json out{{"schema", lcs::kSchemaTag},
                     {"max_residual", rep.max_residual},
                     {"dt", dt},
                     {"fd_step", fd_step},
                     {"grid", grid},
                     {"seeds", rep.seeds.size()}};
            if (!csv_path.empty()) {
                // trajectories (with the accumulated f) from a coarse seed set
                auto field = lcs::moser_field(prob);
                lcs::FlowConfig cfg;
                cfg.field = field;
                cfg.t_end = 1.0;
                cfg.dt = dt;
                cfg.nq = n;
                cfg.p_min = -1e9;
                cfg.p_max = 1e9;
                lcs::SpaceModel coarse = prob.space;
                coarse.q_samples = std::min(grid, 4);
                for (auto x : coarse.grid()) {
                    x.push_back(0.0);
                    cfg.seeds.push_back(x);
                }
                auto trajs = lcs::integrate_flow(cfg);
                write_trajectory_csv(csv_path, trajs, n, 0, true);
                out["csv"] = csv_path;
            }
            emit(out, out_path);
        } else if (*disp_cmd) {
            auto beta = lcs::parse_one_form(beta_expr);
            auto rep = lcs::displaceability_check(beta, tmax, samples, grid, dt);
            json table = json::array();
            for (const auto& s : rep.samples)
                table.push_back({{"t", s.t},
                                 {"min_distance", s.min_distance},
                                 {"argmin", s.argmin_point}});
            json out{{"schema", lcs::kSchemaTag},
                     {"overall_min", rep.overall_min},
                     {"positive", rep.overall_min > 0},
                     {"table", table}};
            if (!csv_path.empty()) {
                lcs::SpaceModel base;
                base.nq = beta.nq();
                base.q_samples = std::min(grid, 4);
                auto s = lcs::cotangent_structure(beta, base);
                lcs::FlowConfig cfg;
                cfg.field = lcs::ode_from(lcs::lee_vector_field(s));
                cfg.t_end = tmax;
                cfg.dt = dt;
                cfg.nq = beta.nq();
                cfg.p_min = -1e9;
                cfg.p_max = 1e9;
                for (const auto& q : base.grid()) {
                    std::vector<double> x(2 * beta.nq(), 0.0);
                    std::copy(q.begin(), q.begin() + beta.nq(), x.begin());
                    cfg.seeds.push_back(x);
                }
                auto trajs = lcs::integrate_flow(cfg);
                write_trajectory_csv(csv_path, trajs, beta.nq(), beta.nq(), false);
                out["csv"] = csv_path;
            }
            emit(out, out_path);
        } else if (*gf_cmd) {
            auto family = lcs::family_from_json(lcs::load_json_file(family_path));
            auto beta = lcs::parse_one_form(beta_expr, family.n());
            if (beta.nq() != family.n())
                throw lcs::Error(lcs::ErrorKind::Precondition,
                                 "beta mentions more coordinates than the family has");
            lcs::BetaField bf(beta);
            lcs::SearchOptions opts;
            opts.tol = tol;
            opts.dedup_radius = dedup;
            opts.q_seeds = qseeds;
            opts.xi_seeds = xiseeds;
            opts.region_epsilon = epsilon;
            auto res = lcs::beta_critical_points(family, bf, opts);
            json pts = json::array();
            for (const auto& p : res.points) pts.push_back(point_to_json(p));
            json warnings = json::array();
            for (const auto& w : res.warnings)
                warnings.push_back({{"cell", w.cell_center}, {"message", w.message}});
            emit(json{{"schema", lcs::kSchemaTag},
                      {"count", res.points.size()},
                      {"exact_on_grid", res.exact_on_grid},
                      {"points", pts},
                      {"warnings", warnings}},
                 out_path);
        } else if (*thm_cmd) {
            auto family = lcs::family_from_json(lcs::load_json_file(family_path));
            auto beta = lcs::parse_one_form(beta_expr, family.n());
            auto complex = lcs::complex_from_json(lcs::load_json_file(complex_path));
            std::optional<lcs::Cocycle> cocycle;
            if (!cocycle_path.empty())
                cocycle = lcs::cocycle_from_json(lcs::load_json_file(cocycle_path));
            lcs::SearchOptions opts;
            opts.q_seeds = qseeds;
            opts.xi_seeds = xiseeds;
            auto rep = lcs::theorem_bound_report(family, beta, complex, cocycle,
                                                 parse_field(field_name), opts);
            json pts = json::array();
            for (const auto& p : rep.points) pts.push_back(point_to_json(p));
            emit(json{{"schema", lcs::kSchemaTag},
                      {"count", rep.count},
                      {"rank", rep.rank},
                      {"satisfied", rep.satisfied},
                      {"betti", rep.betti},
                      {"field", lcs::field_name(rep.field)},
                      {"cocycle", rep.cocycle_used},
                      {"auto_stabilized", rep.auto_stabilized},
                      {"points", pts}},
                 out_path);
        } else if (*mn_cmd) {
            auto f = lcs::parse_scalar(f_expr, 1);
            if (f.nq() != 1)
                throw lcs::Error(lcs::ErrorKind::Precondition,
                                 "circle-mn expects a function of q1 only");
            auto res = lcs::circle_morse_novikov(f, period);
            json zeros = json::array();
            for (const auto& z : res.zeros)
                zeros.push_back({{"theta", z.theta}, {"index", z.index}});
            json diff = json::array();
            for (int i = 0; i < res.differential.rows; ++i) {
                json row = json::array();
                for (int j = 0; j < res.differential.cols; ++j)
                    row.push_back(res.differential.at(i, j).to_string());
                diff.push_back(row);
            }
            emit(json{{"schema", lcs::kSchemaTag},
                      {"period", period},
                      {"zeros", zeros},
                      {"differential", diff},
                      {"betti", res.betti.betti},
                      {"subdivision_betti", res.subdivision_betti.betti}},
                 out_path);
        }
    } catch (const lcs::Error& e) {
        std::cout << lcs::error_to_json(e).dump(2) << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) { return run(argc, argv); }
