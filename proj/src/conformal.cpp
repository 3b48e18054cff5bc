#include "lcs/conformal.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <random>
#include <sstream>

namespace lcs {

namespace {

std::string point_string(const std::vector<double>& x) {
    std::ostringstream os;
    os << "(";
    for (std::size_t i = 0; i < x.size(); ++i) os << (i ? ", " : "") << x[i];
    os << ")";
    return os.str();
}

// omega as a matrix of symbolic entries A[i][j] = omega(d_i, d_j).
std::vector<std::vector<TrigPoly>> omega_matrix(const TrigForm& omega) {
    const int d = omega.nq() + omega.np();
    std::vector<std::vector<TrigPoly>> a(d, std::vector<TrigPoly>(d, TrigPoly(omega.nq(), omega.np())));
    for (const auto& [b, c] : omega.terms()) {
        a[b[0]][b[1]] = a[b[0]][b[1]] + c;
        a[b[1]][b[0]] = a[b[1]][b[0]] - c;
    }
    return a;
}

TrigPoly symbolic_det(const std::vector<std::vector<TrigPoly>>& m,
                      std::vector<int> rows, std::vector<int> cols) {
    if (rows.size() == 1) return m[rows[0]][cols[0]];
    TrigPoly acc(m[0][0].nq(), m[0][0].np());
    std::vector<int> sub_rows(rows.begin() + 1, rows.end());
    for (std::size_t j = 0; j < cols.size(); ++j) {
        if (m[rows[0]][cols[j]].is_zero()) continue;
        std::vector<int> sub_cols;
        for (std::size_t k = 0; k < cols.size(); ++k)
            if (k != j) sub_cols.push_back(cols[k]);
        TrigPoly minor = symbolic_det(m, sub_rows, sub_cols);
        TrigPoly contrib = m[rows[0]][cols[j]] * minor;
        acc = (j % 2 == 0) ? acc + contrib : acc - contrib;
    }
    return acc;
}

TrigPoly symbolic_det(const std::vector<std::vector<TrigPoly>>& m) {
    std::vector<int> idx(m.size());
    for (std::size_t i = 0; i < m.size(); ++i) idx[i] = static_cast<int>(i);
    return symbolic_det(m, idx, idx);
}

// Solve A^T X = rho symbolically through the adjugate; valid when det(A) is a
// nonzero constant (all the cotangent models; the pfaffian is constant there).
std::optional<VectorFieldExpr> solve_symbolic(const TrigForm& omega, const TrigForm& rho) {
    const int d = omega.nq() + omega.np();
    auto a = omega_matrix(omega);
    // transpose (A is antisymmetric: A^T = -A)
    std::vector<std::vector<TrigPoly>> at(d, std::vector<TrigPoly>(d, TrigPoly(omega.nq(), omega.np())));
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) at[i][j] = -a[i][j];

    TrigPoly det = symbolic_det(at);
    if (!det.is_constant() || det.is_zero()) return std::nullopt;
    const Rat det_c = det.constant_value();

    std::vector<TrigPoly> rho_comp(d, TrigPoly(omega.nq(), omega.np()));
    for (const auto& [b, c] : rho.terms()) rho_comp[b[0]] = rho_comp[b[0]] + c;

    VectorFieldExpr x;
    x.nq = omega.nq();
    x.np = omega.np();
    x.components.assign(d, TrigPoly(omega.nq(), omega.np()));
    std::vector<int> all(d);
    for (int i = 0; i < d; ++i) all[i] = i;
    for (int i = 0; i < d; ++i) {
        // adj(AT)_{ij} = (-1)^{i+j} minor(AT, j, i)
        for (int j = 0; j < d; ++j) {
            if (rho_comp[j].is_zero()) continue;
            std::vector<int> rows, cols;
            for (int k = 0; k < d; ++k) {
                if (k != j) rows.push_back(k);
                if (k != i) cols.push_back(k);
            }
            TrigPoly minor = d == 1 ? TrigPoly::constant(omega.nq(), omega.np(), 1)
                                    : symbolic_det(at, rows, cols);
            TrigPoly contrib = minor * rho_comp[j];
            if ((i + j) % 2 == 1) contrib = -contrib;
            x.components[i] = x.components[i] + contrib;
        }
        x.components[i] = x.components[i].scaled(Rat(1) / det_c);
    }
    return x;
}

SolvedField make_solved_field(const ConformalStructure& s, const TrigForm& rho) {
    SolvedField out;
    out.nq = s.space.nq;
    out.np = s.space.np;
    if (auto sym = solve_symbolic(s.omega, rho)) {
        out.symbolic = *sym;
        auto compiled = std::make_shared<CompiledVectorField>(*sym);
        out.eval = [compiled](const double* x, double* y) { compiled->eval(x, y); };
        return out;
    }
    // Pointwise solve A^T X = rho.
    auto cw = std::make_shared<CompiledForm2>(s.omega);
    auto cr = std::make_shared<CompiledForm1>(rho);
    const int d = s.space.dim();
    out.eval = [cw, cr, d](const double* x, double* y) {
        Eigen::MatrixXd a(d, d);
        std::vector<double> buf(d * d), rv(d);
        cw->eval(x, buf.data());
        for (int i = 0; i < d; ++i)
            for (int j = 0; j < d; ++j) a(i, j) = buf[j * d + i]; // transpose
        cr->eval(x, rv.data());
        Eigen::FullPivLU<Eigen::MatrixXd> lu(a);
        if (!lu.isInvertible()) {
            std::vector<double> pt(x, x + d);
            throw Error(ErrorKind::NondegeneracyLost,
                        "omega singular at " + point_string(pt));
        }
        Eigen::VectorXd rhs = Eigen::Map<Eigen::VectorXd>(rv.data(), d);
        Eigen::VectorXd sol = lu.solve(rhs);
        for (int i = 0; i < d; ++i) y[i] = sol(i);
    };
    return out;
}

void check_omega_roundtrip(const ConformalStructure& s, const SolvedField& x,
                           const TrigForm& rho) {
    if (!x.symbolic) return;
    TrigForm back = s.omega.interior(*x.symbolic);
    if (!(back - rho).is_zero())
        throw std::logic_error("symbolic solve failed the round-trip check");
}

} // namespace

std::pair<double, std::vector<double>> min_omega_det(const TrigForm& omega,
                                                     const SpaceModel& space) {
    CompiledForm2 cw(omega);
    const int d = space.dim();
    double best = std::numeric_limits<double>::infinity();
    std::vector<double> argmin;
    std::vector<double> buf(d * d);
    Eigen::MatrixXd a(d, d);
    for (const auto& x : space.grid()) {
        cw.eval(x.data(), buf.data());
        for (int i = 0; i < d; ++i)
            for (int j = 0; j < d; ++j) a(i, j) = buf[i * d + j];
        double det = std::abs(a.determinant());
        if (det < best) {
            best = det;
            argmin = x;
        }
    }
    return {best, argmin};
}

ConformalStructure make_exact_structure(const SpaceModel& space, const TrigForm& eta,
                                        const TrigForm& omega, double nondeg_tol) {
    if (eta.degree() != 1 || omega.degree() != 2)
        throw Error(ErrorKind::Precondition, "structure needs a 1-form and a 2-form");
    if (!eta.d().is_zero())
        throw Error(ErrorKind::NotClosed, "eta is not closed");
    if (!d_eta(omega, eta).is_zero())
        throw Error(ErrorKind::NotClosed, "d_eta omega != 0");
    auto [det, at] = min_omega_det(omega, space);
    if (det < nondeg_tol)
        throw Error(ErrorKind::NondegeneracyLost,
                    "omega degenerate on the grid near " + point_string(at));
    return {space, eta, omega, ClosednessCheck::Exact, 0.0};
}

ConformalStructure make_grid_structure(const SpaceModel& space, const TrigForm& eta,
                                       const TrigForm& omega, double closedness_tol,
                                       double nondeg_tol) {
    if (!eta.d().is_zero())
        throw Error(ErrorKind::NotClosed, "eta is not closed");
    double residual = max_abs_on_grid(d_eta(omega, eta), space);
    if (residual > closedness_tol)
        throw Error(ErrorKind::NotClosed, "d_eta omega grid residual too large");
    auto [det, at] = min_omega_det(omega, space);
    if (det < nondeg_tol)
        throw Error(ErrorKind::NondegeneracyLost,
                    "omega degenerate on the grid near " + point_string(at));
    return {space, eta, omega, ClosednessCheck::Grid, residual};
}

TrigForm tautological_form(int n) {
    TrigForm lambda(1, n, n);
    for (int i = 0; i < n; ++i)
        lambda.add_term({i}, TrigPoly::coordinate_p(n, n, i));
    return lambda;
}

ConformalStructure cotangent_structure(const TrigForm& beta_base,
                                       const SpaceModel& base_space) {
    if (beta_base.degree() != 1 || beta_base.np() != 0)
        throw Error(ErrorKind::Precondition, "beta must be a 1-form on the torus");
    const int n = beta_base.nq();
    SpaceModel space = base_space;
    space.nq = n;
    space.np = n;
    TrigForm eta = beta_base.extended(n, n);
    if (!eta.d().is_zero())
        throw Error(ErrorKind::NotClosed, "beta is not closed");
    TrigForm lambda = tautological_form(n);
    TrigForm omega = lambda.d() - eta.wedge(lambda);
    return make_exact_structure(space, eta, omega);
}

ConformalStructure gauge_transform(const ConformalStructure& s, const TrigPoly& f,
                                   const GaugeOptions& opts) {
    TrigPoly fx = f.nq() == s.space.nq && f.np() == s.space.np
                      ? f
                      : f.extended(s.space.nq, s.space.np);
    TrigForm eta_new = s.eta + TrigForm::function(fx).d();
    auto ef = exp_truncated(fx, opts.exp_target, s.space.p_bound());
    TrigForm omega_new = s.omega.scaled_poly(ef.series);
    return make_grid_structure(s.space, eta_new, omega_new, opts.closedness_tol,
                               opts.nondeg_tol);
}

SolvedField hamiltonian_vector_field(const ConformalStructure& s, const TrigPoly& h) {
    TrigPoly hx = h.nq() == s.space.nq && h.np() == s.space.np
                      ? h
                      : h.extended(s.space.nq, s.space.np);
    // X_H -| omega = -d_eta H = -(dH - H eta)
    TrigForm rho = -(TrigForm::function(hx).d() - s.eta.scaled_poly(hx));
    SolvedField x = make_solved_field(s, rho);
    check_omega_roundtrip(s, x, rho);
    return x;
}

SolvedField lee_vector_field(const ConformalStructure& s) {
    return hamiltonian_vector_field(s, TrigPoly::constant(s.space.nq, s.space.np, 1));
}

SolvedField liouville_vector_field(const ConformalStructure& s, const TrigForm& lambda,
                                   double primitive_tol) {
    TrigForm diff = d_eta(lambda, s.eta) - s.omega;
    if (s.closedness == ClosednessCheck::Exact) {
        if (!diff.is_zero())
            throw Error(ErrorKind::NotPrimitive, "omega != d_eta lambda");
    } else if (max_abs_on_grid(diff, s.space) > primitive_tol) {
        throw Error(ErrorKind::NotPrimitive, "omega != d_eta lambda (grid residual)");
    }
    SolvedField z = make_solved_field(s, lambda);
    check_omega_roundtrip(s, z, lambda);
    return z;
}

IdentitiesReport structural_identities_report(const ConformalStructure& s,
                                              const TrigForm& lambda, int random_cases,
                                              unsigned seed, double tol) {
    IdentitiesReport rep;
    SolvedField lee = lee_vector_field(s);
    SolvedField liouville = liouville_vector_field(s, lambda);
    const int d = s.space.dim();
    CompiledForm1 cl(lambda), ce(s.eta);
    CompiledForm2 cw(s.omega);
    CompiledForm2 cdl(lambda.d());

    std::vector<double> rv(d), zv(d), lv(d), ev(d), w(d * d), dl(d * d);
    int deg_points = 0, minus_one_points = 0, total = 0, mismatches = 0;
    for (const auto& x : s.space.grid()) {
        lee.eval(x.data(), rv.data());
        liouville.eval(x.data(), zv.data());
        cl.eval(x.data(), lv.data());
        ce.eval(x.data(), ev.data());
        cw.eval(x.data(), w.data());
        double lam_r = 0, eta_z = 0, w_zr = 0;
        for (int i = 0; i < d; ++i) {
            lam_r += lv[i] * rv[i];
            eta_z += ev[i] * zv[i];
        }
        for (int i = 0; i < d; ++i)
            for (int j = 0; j < d; ++j) w_zr += zv[i] * w[i * d + j] * rv[j];
        rep.lambda_lee_plus_eta_liouville =
            std::max(rep.lambda_lee_plus_eta_liouville, std::abs(lam_r + eta_z));
        rep.omega_pairing_residual =
            std::max(rep.omega_pairing_residual, std::abs(w_zr - lam_r));

        // ker d lambda nontrivial <=> eta(Z) = -1 (equivalently lambda(R) = 1)
        cdl.eval(x.data(), dl.data());
        Eigen::MatrixXd m(d, d);
        for (int i = 0; i < d; ++i)
            for (int j = 0; j < d; ++j) m(i, j) = dl[i * d + j];
        Eigen::JacobiSVD<Eigen::MatrixXd> svd(m);
        bool degenerate = svd.singularValues()(d - 1) < tol;
        bool minus_one = std::abs(eta_z + 1.0) < tol;
        if (degenerate != minus_one) ++mismatches;
        deg_points += degenerate;
        minus_one_points += minus_one;
        ++total;
    }
    rep.kernel_mismatches = mismatches;
    rep.kernel_criterion_holds = mismatches == 0;
    rep.kind = minus_one_points == total ? "first_kind"
               : minus_one_points == 0   ? "none"
                                         : "mixed";

    // Cartan formula on random fields and forms:
    // L_X beta = X -| d_eta beta + d_eta(X -| beta) + eta(X) beta
    std::mt19937 rng(seed);
    std::uniform_int_distribution<int> freq(-2, 2), coeff(-3, 3), deg_d(1, 2);
    auto random_poly = [&]() {
        TrigPoly p(s.space.nq, s.space.np);
        for (int t = 0; t < 2; ++t) {
            std::vector<int> fr(s.space.nq);
            for (auto& v : fr) v = freq(rng);
            std::vector<int> pw(s.space.np, 0);
            if (s.space.np > 0) pw[static_cast<std::size_t>(t) % s.space.np] = t % 2;
            p = p + TrigPoly::harmonic(s.space.nq, s.space.np, fr, t % 2 == 0,
                                       Rat(coeff(rng), 2), pw);
        }
        return p;
    };
    rep.cartan_exact = true;
    for (int it = 0; it < random_cases; ++it) {
        VectorFieldExpr x;
        x.nq = s.space.nq;
        x.np = s.space.np;
        for (int i = 0; i < d; ++i) x.components.push_back(random_poly());
        int deg = deg_d(rng);
        TrigForm beta(deg, s.space.nq, s.space.np);
        for (int t = 0; t < 2; ++t) {
            std::vector<int> basis;
            std::vector<int> pool(d);
            for (int i = 0; i < d; ++i) pool[i] = i;
            std::shuffle(pool.begin(), pool.end(), rng);
            basis.assign(pool.begin(), pool.begin() + deg);
            beta.add_term(basis, random_poly());
        }
        // independent route: ordinary Cartan, which is exact mathematics
        TrigForm lie = beta.interior(x).d() + beta.d().interior(x);
        TrigForm rhs = d_eta(beta, s.eta).interior(x) +
                       d_eta(beta.interior(x), s.eta) +
                       beta.scaled_poly(s.eta.pair_field(x));
        TrigForm diff = lie - rhs;
        if (!diff.is_zero()) rep.cartan_exact = false;
        rep.cartan_max_residual =
            std::max(rep.cartan_max_residual, max_abs_on_grid(diff, s.space));
    }
    return rep;
}

ContactizationResult contactization_reeb(const ConformalStructure& s,
                                         const TrigForm& lambda, double contact_tol) {
    SolvedField lee = lee_vector_field(s);
    if (!lee.symbolic)
        throw Error(ErrorKind::Precondition,
                    "contactization needs a symbolic Lee field");
    const int nq = s.space.nq, np = s.space.np;
    const int nz = np + 1; // z appended as the last fiber coordinate
    const int d = nq + nz;

    TrigForm eta_x = s.eta.extended(nq, nz);
    TrigForm lambda_x = lambda.extended(nq, nz);
    TrigPoly z = TrigPoly::coordinate_p(nq, nz, np);
    TrigForm dz = TrigForm::term(nq, nz, {d - 1}, TrigPoly::constant(nq, nz, 1));
    TrigForm alpha = dz - eta_x.scaled_poly(z) - lambda_x;

    // R = (1 + lambda(R_eta)) dz - R_eta
    TrigPoly lam_r = lambda.pair_field(*lee.symbolic).extended(nq, nz);
    VectorFieldExpr reeb;
    reeb.nq = nq;
    reeb.np = nz;
    reeb.components.assign(d, TrigPoly(nq, nz));
    for (int i = 0; i < nq + np; ++i)
        reeb.components[i] = -lee.symbolic->components[i].extended(nq, nz);
    reeb.components[d - 1] = TrigPoly::constant(nq, nz, 1) + lam_r;

    ContactizationResult out;
    out.reeb = reeb;

    SpaceModel ext = s.space;
    ext.np = nz;

    // contact condition: alpha ^ (d alpha)^n nonvanishing
    TrigForm vol = alpha;
    TrigForm da = alpha.d();
    for (int i = 0; i < (nq + np) / 2; ++i) vol = vol.wedge(da);
    double min_vol = std::numeric_limits<double>::infinity();
    std::vector<std::pair<std::vector<int>, CompiledPoly>> cv;
    for (const auto& [b, c] : vol.terms()) cv.emplace_back(b, CompiledPoly(c));
    for (const auto& x : ext.grid()) {
        double v = 0;
        for (const auto& [b, c] : cv) v += std::abs(c.eval(x.data(), x.data() + nq));
        min_vol = std::min(min_vol, v);
    }
    out.min_contact_volume = min_vol;
    if (min_vol < contact_tol)
        throw Error(ErrorKind::ContactConditionFailed,
                    "alpha ^ (d alpha)^n vanishes on the grid");

    TrigPoly alpha_r = alpha.pair_field(reeb) - TrigPoly::constant(nq, nz, 1);
    TrigForm dalpha_r = da.interior(reeb);
    out.identities_exact = alpha_r.is_zero() && dalpha_r.is_zero();
    out.alpha_r_residual = max_abs_on_grid(TrigForm::function(alpha_r), ext);
    out.dalpha_r_residual = max_abs_on_grid(dalpha_r, ext);
    return out;
}

} // namespace lcs
