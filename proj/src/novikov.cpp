#include "lcs/novikov.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <string>

namespace lcs {

namespace {

// Tree-gauged cocycle: pick a spanning forest of the 1-skeleton and subtract
// the coboundary of the vertex potential, so tree edges carry value 0 and
// every chosen cell lift sits at height 0 over its basepoint.
std::vector<long long> gauged_values(const CellComplex& complex, const Cocycle& eta,
                                     unsigned seed) {
    const int nv = complex.cells(0);
    const int ne = complex.cells(1);
    std::vector<std::vector<int>> adj(nv); // vertex -> incident edge ids
    for (int e = 0; e < ne; ++e) {
        adj[complex.edge_source(e)].push_back(e);
        adj[complex.edge_target(e)].push_back(e);
    }
    std::vector<int> vertex_order(nv), edge_rank(ne);
    std::iota(vertex_order.begin(), vertex_order.end(), 0);
    std::iota(edge_rank.begin(), edge_rank.end(), 0);
    if (seed != 0) {
        std::mt19937 rng(seed);
        std::shuffle(vertex_order.begin(), vertex_order.end(), rng);
        std::shuffle(edge_rank.begin(), edge_rank.end(), rng);
        for (auto& a : adj)
            std::sort(a.begin(), a.end(),
                      [&](int x, int y) { return edge_rank[x] < edge_rank[y]; });
    }

    std::vector<long long> phi(nv, 0);
    std::vector<char> seen(nv, 0);
    for (int root : vertex_order) {
        if (seen[root]) continue;
        seen[root] = 1;
        std::vector<int> stack{root};
        while (!stack.empty()) {
            int v = stack.back();
            stack.pop_back();
            for (int e : adj[v]) {
                int s = complex.edge_source(e), t = complex.edge_target(e);
                if (v == s && !seen[t]) {
                    phi[t] = phi[s] + eta.edge_values[e];
                    seen[t] = 1;
                    stack.push_back(t);
                } else if (v == t && !seen[s]) {
                    phi[s] = phi[t] - eta.edge_values[e];
                    seen[s] = 1;
                    stack.push_back(s);
                }
            }
        }
    }

    std::vector<long long> gauged(ne);
    for (int e = 0; e < ne; ++e)
        gauged[e] = eta.edge_values[e] + phi[complex.edge_source(e)] -
                    phi[complex.edge_target(e)];
    return gauged;
}

void add_monomial(LaurentMatrix& m, int row, int col, int coeff, long long w,
                  Field field) {
    m.at(row, col) =
        m.at(row, col) + LaurentPoly::monomial(field, static_cast<long>(w), Rat(coeff));
}

} // namespace

LaurentMatrix twisted_boundary(const CellComplex& complex, const Cocycle& eta,
                               int k, Field field, const LiftOptions& opts) {
    complex.validate();
    eta.validate(complex);
    if (k < 1 || k > complex.dim)
        throw Error(ErrorKind::Precondition, "twisted_boundary: k out of range");

    const auto gauged = gauged_values(complex, eta, opts.tree_seed);
    const bool twisting = !eta.is_zero();
    LaurentMatrix m(complex.cells(k - 1), complex.cells(k), field);

    for (int i = 0; i < complex.cells(k); ++i) {
        const auto& faces = complex.faces_of(k, i);
        if (k == 1) {
            int e = i;
            add_monomial(m, complex.edge_target(e), i, 1, gauged[e], field);
            add_monomial(m, complex.edge_source(e), i, -1, 0, field);
            continue;
        }
        const bool walk_form = k == 2 && !faces.empty() && !faces.front().has_path;
        if (walk_form) {
            long long h = 0;
            for (const auto& f : faces) {
                if (f.coeff > 0) {
                    add_monomial(m, f.face, i, 1, h, field);
                    h += gauged[f.face];
                } else {
                    h -= gauged[f.face];
                    add_monomial(m, f.face, i, -1, h, field);
                }
            }
            continue;
        }
        for (const auto& f : faces) {
            if (!f.has_path && twisting)
                throw Error(ErrorKind::BadComplex,
                            "cell of dimension " + std::to_string(k) +
                                " lacks lift paths; required for twisted boundaries");
            long long w = 0;
            for (const auto& [e, s] : f.path) w += s * gauged[e];
            add_monomial(m, f.face, i, f.coeff, w, field);
        }
    }
    return m;
}

NovikovBetti novikov_betti(const CellComplex& complex, const Cocycle& eta,
                           Field field, const LiftOptions& opts) {
    std::vector<LaurentMatrix> boundary(complex.dim + 1);
    for (int k = 1; k <= complex.dim; ++k)
        boundary[k] = twisted_boundary(complex, eta, k, field, opts);
    for (int k = 1; k + 1 <= complex.dim; ++k)
        if (!(boundary[k] * boundary[k + 1]).is_zero())
            throw Error(ErrorKind::BadComplex,
                        "twisted boundaries do not compose to zero; lift paths "
                        "are inconsistent at dimension " + std::to_string(k + 1));

    std::vector<int> rank(complex.dim + 2, 0);
    for (int k = 1; k <= complex.dim; ++k)
        rank[k] = rank_over_fraction_field(boundary[k]);

    NovikovBetti out;
    out.field = field;
    out.betti.resize(complex.dim + 1);
    for (int k = 0; k <= complex.dim; ++k)
        out.betti[k] = complex.cells(k) - rank[k] - rank[k + 1];
    return out;
}

bool verify_duality(const CellComplex& complex, const Cocycle& eta, Field field) {
    if (!complex.is_closed_manifold)
        throw Error(ErrorKind::Precondition,
                    "verify_duality requires a closed manifold complex");
    if (!complex.is_orientable && field != Field::GF2)
        throw Error(ErrorKind::Precondition,
                    "verify_duality over Q requires orientability; use F2");
    const auto b = novikov_betti(complex, eta, field);
    const int n = complex.dim;
    for (int k = 0; k <= n; ++k)
        if (b.betti[k] != b.betti[n - k]) return false;
    return true;
}

// --- dimension 1, done exactly ---------------------------------------------

CircleMorseNovikov circle_morse_novikov(const TrigPoly& f, long period,
                                        double zero_tol) {
    if (f.nq() != 1 || f.np() != 0)
        throw Error(ErrorKind::Precondition,
                    "circle_morse_novikov expects a trig polynomial on S^1");
    const Rat mean = f.torus_mean();
    // eta = s f dtheta with s > 0 and integral(eta) = 2 pi s * mean = period.
    if (period == 0 && mean != 0)
        throw Error(ErrorKind::Precondition,
                    "period 0 requires a mean-zero coefficient function");
    if (period != 0 && ((period > 0) != (mean > 0)))
        throw Error(ErrorKind::Precondition,
                    "period sign must match the mean of f (normalization s > 0)");

    CompiledPoly cf(f);
    TrigPoly fp = f.derivative_q(0);
    CompiledPoly cfp(fp);
    auto eval = [&](double th) { return cf.eval(&th, nullptr); };
    auto evalp = [&](double th) { return cfp.eval(&th, nullptr); };

    // zeros by sign change + bisection, then a simplicity check
    const int samples = 4096;
    const double two_pi = 2.0 * M_PI;
    std::vector<double> zeros;
    double prev = eval(0.0);
    for (int i = 1; i <= samples; ++i) {
        double x = two_pi * i / samples;
        double v = eval(x);
        if (prev == 0.0 || prev * v < 0) {
            double lo = two_pi * (i - 1) / samples, hi = x, vlo = prev;
            for (int it = 0; it < 120; ++it) {
                double mid = 0.5 * (lo + hi), vm = eval(mid);
                if (vlo * vm <= 0) hi = mid;
                else { lo = mid; vlo = vm; }
            }
            zeros.push_back(0.5 * (lo + hi));
        }
        prev = v;
    }
    for (double z : zeros)
        if (std::abs(evalp(z)) < zero_tol)
            throw Error(ErrorKind::Degenerate,
                        "degenerate zero of eta near theta = " + std::to_string(z));
    // tangential (no-sign-change) zeros: zeros of f' where f is also ~ 0
    if (!f.is_constant()) {
        double prevd = evalp(0.0);
        for (int i = 1; i <= samples; ++i) {
            double x = two_pi * i / samples;
            double v = evalp(x);
            if (prevd == 0.0 || prevd * v < 0) {
                double lo = two_pi * (i - 1) / samples, hi = x, vlo = prevd;
                for (int it = 0; it < 120; ++it) {
                    double mid = 0.5 * (lo + hi), vm = evalp(mid);
                    if (vlo * vm <= 0) hi = mid;
                    else { lo = mid; vlo = vm; }
                }
                double crit = 0.5 * (lo + hi);
                if (std::abs(eval(crit)) < zero_tol)
                    throw Error(ErrorKind::Degenerate,
                                "degenerate zero of eta near theta = " +
                                    std::to_string(crit));
            }
            prevd = v;
        }
    }

    CircleMorseNovikov out;
    const int nz = static_cast<int>(zeros.size());
    std::vector<int> row_of(nz, -1); // index-0 zeros -> row
    int n0 = 0, n1 = 0;
    for (int j = 0; j < nz; ++j) {
        int idx = evalp(zeros[j]) < 0 ? 1 : 0;
        out.zeros.push_back({zeros[j], idx});
        if (idx == 0) row_of[j] = n0++;
        else ++n1;
    }

    // d(q_j) = +t^{w_R} q_{j+1} - t^{w_L} q_{j-1}; the exponent is the class
    // value of the flow arc closed up by theta-increasing capping paths
    // through the basepoint zero, so only arcs across theta = theta_0 wind.
    out.differential = LaurentMatrix(n0, n1, Field::Rationals);
    int col = 0;
    for (int j = 0; j < nz; ++j) {
        if (out.zeros[j].index != 1) continue;
        int right = (j + 1) % nz;
        int left = (j - 1 + nz) % nz;
        long w_right = (j == nz - 1) ? period : 0;
        long w_left = (j == 0) ? -period : 0;
        out.differential.at(row_of[right], col) =
            out.differential.at(row_of[right], col) +
            LaurentPoly::monomial(Field::Rationals, w_right, 1);
        out.differential.at(row_of[left], col) =
            out.differential.at(row_of[left], col) -
            LaurentPoly::monomial(Field::Rationals, w_left, 1);
        ++col;
    }

    const int r = rank_over_fraction_field(out.differential);
    out.betti = NovikovBetti{{n0 - r, n1 - r}, Field::Rationals};

    // cross-check against the induced subdivision complex
    const int nsub = nz > 0 ? nz : 1;
    CellComplex sub = complexes::circle(nsub);
    Cocycle eta_sub;
    eta_sub.edge_values.assign(nsub, 0);
    eta_sub.edge_values[nsub - 1] = period;
    out.subdivision_betti = novikov_betti(sub, eta_sub, Field::Rationals);
    if (nz > 0 && out.subdivision_betti != out.betti)
        throw std::logic_error("circle Morse-Novikov disagrees with the cell complex");
    if (nz == 0 && (out.betti.betti[0] != out.subdivision_betti.betti[0] ||
                    out.betti.betti[1] != out.subdivision_betti.betti[1]))
        throw std::logic_error("empty complex disagrees with the cell complex");
    return out;
}

} // namespace lcs
