// Python bindings for the main operations. Structured inputs and outputs
// travel as JSON strings; the lcslab package wraps them with dict-level
// conveniences.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "lcs/flow.hpp"
#include "lcs/genfam.hpp"
#include "lcs/json_io.hpp"
#include "lcs/moser.hpp"
#include "lcs/novikov.hpp"

namespace py = pybind11;

namespace {

lcs::json parse(const std::string& s) {
    try {
        return lcs::json::parse(s);
    } catch (const nlohmann::json::exception& e) {
        throw lcs::Error(lcs::ErrorKind::Parse, e.what());
    }
}

lcs::Field field_of(const std::string& name) {
    if (name == "Q") return lcs::Field::Rationals;
    if (name == "F2") return lcs::Field::GF2;
    throw lcs::Error(lcs::ErrorKind::Parse, "field must be Q or F2");
}

std::string points_json(const std::vector<lcs::BetaCriticalPoint>& pts) {
    lcs::json arr = lcs::json::array();
    for (const auto& p : pts)
        arr.push_back({{"q", p.q},
                       {"xi", p.xi},
                       {"F", p.f_value},
                       {"residual", p.residual},
                       {"region", lcs::region_name(p.region)},
                       {"index", p.index},
                       {"transversal", p.transversal}});
    return arr.dump();
}

} // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Novikov homology, Lichnerowicz-De Rham calculus, Moser flows and "
              "beta-generating families on tori";

    py::register_exception<lcs::Error>(m, "LcsError");

    m.def(
        "novikov_betti",
        [](const std::string& complex_json, const std::string& cocycle_json,
           const std::string& field) {
            auto complex = lcs::complex_from_json(parse(complex_json));
            auto cocycle = lcs::cocycle_from_json(parse(cocycle_json));
            return lcs::novikov_betti(complex, cocycle, field_of(field)).betti;
        },
        py::arg("complex_json"), py::arg("cocycle_json"), py::arg("field") = "Q",
        "Novikov Betti numbers of a finite complex with an integer 1-cocycle");

    m.def(
        "verify_duality",
        [](const std::string& complex_json, const std::string& cocycle_json,
           const std::string& field) {
            auto complex = lcs::complex_from_json(parse(complex_json));
            auto cocycle = lcs::cocycle_from_json(parse(cocycle_json));
            return lcs::verify_duality(complex, cocycle, field_of(field));
        },
        py::arg("complex_json"), py::arg("cocycle_json"), py::arg("field") = "Q");

    m.def(
        "circle_morse_novikov",
        [](const std::string& f_expr, long period) {
            auto f = lcs::parse_scalar(f_expr, 1);
            auto r = lcs::circle_morse_novikov(f, period);
            lcs::json zeros = lcs::json::array();
            for (const auto& z : r.zeros)
                zeros.push_back({{"theta", z.theta}, {"index", z.index}});
            lcs::json diff = lcs::json::array();
            for (int i = 0; i < r.differential.rows; ++i) {
                lcs::json row = lcs::json::array();
                for (int j = 0; j < r.differential.cols; ++j)
                    row.push_back(r.differential.at(i, j).to_string());
                diff.push_back(row);
            }
            return lcs::json{{"zeros", zeros},
                             {"differential", diff},
                             {"betti", r.betti.betti},
                             {"subdivision_betti", r.subdivision_betti.betti}}
                .dump();
        },
        py::arg("f"), py::arg("period"),
        "Exact Morse-Novikov data of f(theta) dtheta on the circle (JSON string)");

    m.def(
        "d_eta",
        [](const std::string& beta_json, const std::string& eta_json) {
            auto beta = lcs::form_from_json(parse(beta_json));
            auto eta = lcs::form_from_json(parse(eta_json));
            return lcs::form_to_json(lcs::d_eta(beta, eta)).dump();
        },
        py::arg("beta_json"), py::arg("eta_json"),
        "Lichnerowicz-De Rham differential d beta - eta ^ beta (form JSON)");

    m.def(
        "parse_one_form",
        [](const std::string& expr) {
            return lcs::form_to_json(lcs::parse_one_form(expr)).dump();
        },
        py::arg("expr"), "Parse the CLI 1-form grammar into form JSON");

    m.def(
        "displaceability",
        [](const std::string& beta_expr, double tmax, int samples, int grid) {
            auto beta = lcs::parse_one_form(beta_expr);
            auto rep = lcs::displaceability_check(beta, tmax, samples, grid);
            lcs::json table = lcs::json::array();
            for (const auto& s : rep.samples)
                table.push_back({{"t", s.t}, {"min_distance", s.min_distance}});
            return lcs::json{{"overall_min", rep.overall_min}, {"table", table}}.dump();
        },
        py::arg("beta"), py::arg("tmax") = 1.0, py::arg("samples") = 100,
        py::arg("grid") = 16);

    m.def(
        "moser_residual",
        [](const std::string& eta, const std::string& lambda0, const std::string& lambda1,
           double dt, int grid) {
            lcs::MoserProblem prob;
            prob.eta = lcs::parse_one_form(eta);
            int n = prob.eta.nq();
            prob.lambda0 = lcs::parse_one_form(lambda0, n);
            prob.lambda1 = lcs::parse_one_form(lambda1, n);
            n = std::max({n, prob.lambda0.nq(), prob.lambda1.nq()});
            prob.eta = prob.eta.extended(n, 0);
            prob.lambda0 = prob.lambda0.extended(n, 0);
            prob.lambda1 = prob.lambda1.extended(n, 0);
            prob.space.nq = n;
            prob.space.q_samples = grid;
            lcs::MoserOptions opts;
            opts.dt = dt;
            opts.fd_step = dt;
            return lcs::moser_flow(prob, opts).max_residual;
        },
        py::arg("eta"), py::arg("lambda0"), py::arg("lambda1"), py::arg("dt") = 1e-3,
        py::arg("grid") = 8,
        "max |phi_t^* omega_t - e^{f_t} omega_0| for the affine Moser path");

    m.def(
        "beta_critical_points",
        [](const std::string& family_json, const std::string& beta_expr, int q_seeds,
           int xi_seeds) {
            auto family = lcs::family_from_json(parse(family_json));
            auto beta = lcs::parse_one_form(beta_expr, family.n());
            lcs::BetaField bf(beta);
            lcs::SearchOptions opts;
            opts.q_seeds = q_seeds;
            opts.xi_seeds = xi_seeds;
            auto res = lcs::beta_critical_points(family, bf, opts);
            return lcs::json{{"count", res.points.size()},
                             {"exact_on_grid", res.exact_on_grid},
                             {"points", lcs::json::parse(points_json(res.points))}}
                .dump();
        },
        py::arg("family_json"), py::arg("beta"), py::arg("q_seeds") = 64,
        py::arg("xi_seeds") = 33);

    m.def(
        "theorem_check",
        [](const std::string& family_json, const std::string& beta_expr,
           const std::string& complex_json, const std::string& field, int q_seeds,
           int xi_seeds) {
            auto family = lcs::family_from_json(parse(family_json));
            auto beta = lcs::parse_one_form(beta_expr, family.n());
            auto complex = lcs::complex_from_json(parse(complex_json));
            lcs::SearchOptions opts;
            opts.q_seeds = q_seeds;
            opts.xi_seeds = xi_seeds;
            auto rep = lcs::theorem_bound_report(family, beta, complex, std::nullopt,
                                                 field_of(field), opts);
            return lcs::json{{"count", rep.count},
                             {"rank", rep.rank},
                             {"satisfied", rep.satisfied},
                             {"betti", rep.betti},
                             {"cocycle", rep.cocycle_used},
                             {"auto_stabilized", rep.auto_stabilized}}
                .dump();
        },
        py::arg("family_json"), py::arg("beta"), py::arg("complex_json"),
        py::arg("field") = "Q", py::arg("q_seeds") = 64, py::arg("xi_seeds") = 33);

    m.def(
        "laurent_rank",
        [](const std::vector<std::vector<std::vector<std::vector<long long>>>>& entries,
           const std::string& field) {
            // entries[i][j] = list of [exponent, numerator, denominator]
            if (entries.empty()) return 0;
            lcs::Field f = field_of(field);
            lcs::LaurentMatrix m(static_cast<int>(entries.size()),
                                 static_cast<int>(entries[0].size()), f);
            for (std::size_t i = 0; i < entries.size(); ++i)
                for (std::size_t j = 0; j < entries[i].size(); ++j) {
                    lcs::LaurentPoly p(f);
                    for (const auto& t : entries[i][j]) {
                        long long den = t.size() > 2 ? t[2] : 1;
                        p = p + lcs::LaurentPoly::monomial(
                                    f, static_cast<long>(t[0]), lcs::Rat(t[1], den));
                    }
                    m.at(static_cast<int>(i), static_cast<int>(j)) = p;
                }
            return lcs::rank_over_fraction_field(m);
        },
        py::arg("entries"), py::arg("field") = "Q",
        "Rank over F(t); entries are lists of [exp, num, den] monomials");

    m.attr("__version__") = "0.1.0";
}
