#include "lcs/genfam.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>

namespace lcs {

namespace {

constexpr double kTwoPi = 2.0 * M_PI;

double wrap_angle(double q) {
    double w = std::fmod(q, kTwoPi);
    return w < 0 ? w + kTwoPi : w;
}

double torus_distance2(const std::vector<double>& a, const std::vector<double>& b, int n) {
    double acc = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        double d;
        if (static_cast<int>(i) < n) {
            d = std::abs(wrap_angle(a[i]) - wrap_angle(b[i]));
            d = std::min(d, kTwoPi - d);
        } else {
            d = a[i] - b[i];
        }
        acc += d * d;
    }
    return acc;
}

// standard bump in u = |xi|^2 / R^2: 1 at u = 0, support u <= 1
struct BumpVal {
    double v = 0, d1 = 0, d2 = 0; // value and derivatives in u
};

BumpVal bump_u(double u) {
    if (u >= 1.0 - 1e-12) return {};
    double s = 1.0 - u;
    double g1 = -1.0 / (s * s);        // g' for g = 1 - 1/(1-u)
    double g2 = -2.0 / (s * s * s);    // g''
    double v = std::exp(1.0 - 1.0 / s);
    return {v, v * g1, v * (g1 * g1 + g2)};
}

// psi(x) = exp(-1/x) for x > 0
double psi(double x) { return x > 0 ? std::exp(-1.0 / x) : 0.0; }
double psi_d(double x) { return x > 0 ? psi(x) / (x * x) : 0.0; }

// chi = 1 on [-1,1], 0 outside [-2,2], smooth
void chi_eval(double u, double& chi, double& dchi) {
    double a = 4.0 - u * u, b = u * u - 1.0;
    double pa = psi(a), pb = psi(b);
    double den = pa + pb;
    chi = pa / den;
    double pa_u = psi_d(a) * (-2.0 * u);
    double pb_u = psi_d(b) * (2.0 * u);
    dchi = (pa_u * pb - pa * pb_u) / (den * den);
}

} // namespace

// --- families ---------------------------------------------------------------

GeneratingFamily::GeneratingFamily(int n, int m, std::vector<std::vector<double>> quad,
                                   double ball_radius, std::vector<CoreTerm> core)
    : n_(n), m_(m), quad_(std::move(quad)), ball_radius_(ball_radius),
      core_(std::move(core)) {
    validate();
}

void GeneratingFamily::validate() const {
    if (n_ < 1 || m_ < 0)
        throw Error(ErrorKind::Precondition, "family needs n >= 1, m >= 0");
    if (static_cast<int>(quad_.size()) != m_)
        throw Error(ErrorKind::Precondition, "quadratic form size != m");
    for (const auto& row : quad_)
        if (static_cast<int>(row.size()) != m_)
            throw Error(ErrorKind::Precondition, "quadratic form is not square");
    for (int i = 0; i < m_; ++i)
        for (int j = 0; j < i; ++j)
            if (std::abs(quad_[i][j] - quad_[j][i]) > 1e-12)
                throw Error(ErrorKind::Precondition, "quadratic form is not symmetric");
    if (m_ > 0) {
        if (ball_radius_ <= 0)
            throw Error(ErrorKind::Precondition, "ball_radius must be positive");
        Eigen::MatrixXd q(m_, m_);
        for (int i = 0; i < m_; ++i)
            for (int j = 0; j < m_; ++j) q(i, j) = quad_[i][j];
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(q);
        if (es.eigenvalues().cwiseAbs().minCoeff() < 1e-9)
            throw Error(ErrorKind::Degenerate, "quadratic form is degenerate");
    }
    for (const auto& t : core_) {
        if (static_cast<int>(t.freq.size()) != n_ ||
            static_cast<int>(t.xi_pow.size()) != m_)
            throw Error(ErrorKind::Precondition, "core term shape mismatch");
    }
    // quadratic at infinity: F == quad at sample points with |xi| > R
    if (m_ > 0) {
        std::vector<double> q(n_, 0.9), xi(m_, 0.0);
        for (int axis = 0; axis < m_; ++axis) {
            for (double r : {1.03 * ball_radius_, 2.0 * ball_radius_ + 1.0}) {
                std::fill(xi.begin(), xi.end(), 0.0);
                xi[axis] = r;
                double quad_val = 0;
                for (int i = 0; i < m_; ++i)
                    for (int j = 0; j < m_; ++j) quad_val += xi[i] * quad_[i][j] * xi[j];
                if (std::abs(value(q.data(), xi.data()) - quad_val) > 1e-12)
                    throw Error(ErrorKind::Precondition,
                                "family is not quadratic outside the stated ball");
            }
        }
    }
}

int GeneratingFamily::quad_index() const {
    if (m_ == 0) return 0;
    Eigen::MatrixXd q(m_, m_);
    for (int i = 0; i < m_; ++i)
        for (int j = 0; j < m_; ++j) q(i, j) = quad_[i][j];
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(q);
    int k = 0;
    for (int i = 0; i < m_; ++i)
        if (es.eigenvalues()(i) < 0) ++k;
    return k;
}

double GeneratingFamily::value(const double* q, const double* xi) const {
    double acc = 0;
    for (int i = 0; i < m_; ++i)
        for (int j = 0; j < m_; ++j) acc += xi[i] * quad_[i][j] * xi[j];
    double u = 0;
    for (int j = 0; j < m_; ++j) u += xi[j] * xi[j];
    if (m_ > 0) u /= ball_radius_ * ball_radius_;
    BumpVal rho = m_ == 0 ? BumpVal{1.0, 0.0, 0.0} : bump_u(u);
    if (rho.v == 0.0) return acc;
    for (const auto& t : core_) {
        double phase = 0;
        for (int i = 0; i < n_; ++i) phase += t.freq[i] * q[i];
        double v = t.coeff * (t.sine ? std::sin(phase) : std::cos(phase));
        for (int j = 0; j < m_; ++j)
            for (int a = 0; a < t.xi_pow[j]; ++a) v *= xi[j];
        acc += v * rho.v;
    }
    return acc;
}

void GeneratingFamily::gradient(const double* q, const double* xi, double* out) const {
    const int d = n_ + m_;
    std::fill(out, out + d, 0.0);
    for (int i = 0; i < m_; ++i)
        for (int j = 0; j < m_; ++j) out[n_ + i] += 2.0 * quad_[i][j] * xi[j];
    const double r2 = m_ > 0 ? ball_radius_ * ball_radius_ : 1.0;
    double u = 0;
    for (int j = 0; j < m_; ++j) u += xi[j] * xi[j];
    u /= r2;
    BumpVal rho = m_ == 0 ? BumpVal{1.0, 0.0, 0.0} : bump_u(u);
    if (rho.v == 0.0 && rho.d1 == 0.0) return;
    for (const auto& t : core_) {
        double phase = 0;
        for (int i = 0; i < n_; ++i) phase += t.freq[i] * q[i];
        double trig = t.sine ? std::sin(phase) : std::cos(phase);
        double dtrig = t.sine ? std::cos(phase) : -std::sin(phase);
        double mono = 1.0;
        for (int j = 0; j < m_; ++j)
            for (int a = 0; a < t.xi_pow[j]; ++a) mono *= xi[j];
        // q derivatives
        for (int i = 0; i < n_; ++i)
            if (t.freq[i] != 0)
                out[i] += t.coeff * t.freq[i] * dtrig * mono * rho.v;
        // xi derivatives: d(mono * rho)/dxi_j
        for (int j = 0; j < m_; ++j) {
            double dmono = 0.0;
            if (t.xi_pow[j] > 0) {
                dmono = t.xi_pow[j];
                for (int l = 0; l < m_; ++l) {
                    int p = t.xi_pow[l] - (l == j ? 1 : 0);
                    for (int a = 0; a < p; ++a) dmono *= xi[l];
                }
            }
            double du = 2.0 * xi[j] / r2;
            out[n_ + j] += t.coeff * trig * (dmono * rho.v + mono * rho.d1 * du);
        }
    }
}

void GeneratingFamily::hessian(const double* q, const double* xi, double* out) const {
    const int d = n_ + m_;
    std::fill(out, out + d * d, 0.0);
    for (int i = 0; i < m_; ++i)
        for (int j = 0; j < m_; ++j) out[(n_ + i) * d + (n_ + j)] += 2.0 * quad_[i][j];
    const double r2 = m_ > 0 ? ball_radius_ * ball_radius_ : 1.0;
    double u = 0;
    for (int j = 0; j < m_; ++j) u += xi[j] * xi[j];
    u /= r2;
    BumpVal rho = m_ == 0 ? BumpVal{1.0, 0.0, 0.0} : bump_u(u);
    if (rho.v == 0.0 && rho.d1 == 0.0 && rho.d2 == 0.0) return;

    auto monomial = [&](const std::vector<int>& pow) {
        double v = 1.0;
        for (int l = 0; l < m_; ++l)
            for (int a = 0; a < pow[l]; ++a) v *= xi[l];
        return v;
    };

    for (const auto& t : core_) {
        double phase = 0;
        for (int i = 0; i < n_; ++i) phase += t.freq[i] * q[i];
        double trig = t.sine ? std::sin(phase) : std::cos(phase);
        double dtrig = t.sine ? std::cos(phase) : -std::sin(phase);
        double mono = monomial(t.xi_pow);

        // first xi-derivatives of mono, and of the xi-part B = mono * rho
        std::vector<double> dmono(m_, 0.0), db(m_, 0.0), du(m_, 0.0);
        for (int j = 0; j < m_; ++j) {
            du[j] = 2.0 * xi[j] / r2;
            if (t.xi_pow[j] > 0) {
                auto pow = t.xi_pow;
                --pow[j];
                dmono[j] = t.xi_pow[j] * monomial(pow);
            }
            db[j] = dmono[j] * rho.v + mono * rho.d1 * du[j];
        }

        // qq block
        for (int i = 0; i < n_; ++i)
            for (int l = 0; l < n_; ++l)
                if (t.freq[i] && t.freq[l])
                    out[i * d + l] +=
                        -t.coeff * t.freq[i] * t.freq[l] * trig * mono * rho.v;
        // q-xi blocks
        for (int i = 0; i < n_; ++i) {
            if (!t.freq[i]) continue;
            for (int j = 0; j < m_; ++j) {
                double v = t.coeff * t.freq[i] * dtrig * db[j];
                out[i * d + (n_ + j)] += v;
                out[(n_ + j) * d + i] += v;
            }
        }
        // xi-xi block
        for (int j = 0; j < m_; ++j)
            for (int l = 0; l <= j; ++l) {
                double ddmono = 0.0;
                if (t.xi_pow[j] > 0) {
                    auto pow = t.xi_pow;
                    --pow[j];
                    int factor = t.xi_pow[j];
                    if (pow[l] > 0) {
                        int f2 = pow[l];
                        --pow[l];
                        ddmono = factor * f2 * monomial(pow);
                    }
                }
                double u_jl = (j == l) ? 2.0 / r2 : 0.0;
                double v = t.coeff * trig *
                           (ddmono * rho.v + dmono[j] * rho.d1 * du[l] +
                            dmono[l] * rho.d1 * du[j] +
                            mono * (rho.d2 * du[j] * du[l] + rho.d1 * u_jl));
                out[(n_ + j) * d + (n_ + l)] += v;
                if (j != l) out[(n_ + l) * d + (n_ + j)] += v;
            }
    }
}

StabilizedFamily::StabilizedFamily(const FamilyEval& base, int sign)
    : base_(base), sign_(sign >= 0 ? 1.0 : -1.0) {}

double StabilizedFamily::value(const double* q, const double* xi) const {
    double extra = xi[base_.m()];
    return base_.value(q, xi) + sign_ * extra * extra;
}

void StabilizedFamily::gradient(const double* q, const double* xi, double* out) const {
    const int d = dim();
    base_.gradient(q, xi, out);
    out[d - 1] = 2.0 * sign_ * xi[base_.m()];
}

void StabilizedFamily::hessian(const double* q, const double* xi, double* out) const {
    const int d = dim();
    const int bd = base_.dim();
    thread_local std::vector<double> buf;
    buf.resize(bd * bd);
    base_.hessian(q, xi, buf.data());
    std::fill(out, out + d * d, 0.0);
    for (int i = 0; i < bd; ++i)
        for (int j = 0; j < bd; ++j) out[i * d + j] = buf[i * bd + j];
    out[(d - 1) * d + (d - 1)] = 2.0 * sign_;
}

GaugedFamily::GaugedFamily(const FamilyEval& base, const TrigPoly& f)
    : base_(base), f_(f) {
    if (f.np() != 0 || f.nq() != base.n())
        throw Error(ErrorKind::Precondition, "gauge function must live on the torus");
    for (int i = 0; i < base.n(); ++i) {
        df_.emplace_back(f.derivative_q(i));
        std::vector<CompiledPoly> row;
        for (int j = 0; j < base.n(); ++j)
            row.emplace_back(f.derivative_q(i).derivative_q(j));
        ddf_.push_back(std::move(row));
    }
}

double GaugedFamily::value(const double* q, const double* xi) const {
    return std::exp(f_.eval(q, nullptr)) * base_.value(q, xi);
}

void GaugedFamily::gradient(const double* q, const double* xi, double* out) const {
    const int d = dim();
    const int nn = n();
    base_.gradient(q, xi, out);
    double ef = std::exp(f_.eval(q, nullptr));
    double fv = base_.value(q, xi);
    for (int i = 0; i < d; ++i) out[i] *= ef;
    for (int i = 0; i < nn; ++i) out[i] += ef * fv * df_[i].eval(q, nullptr);
}

void GaugedFamily::hessian(const double* q, const double* xi, double* out) const {
    const int d = dim();
    const int nn = n();
    thread_local std::vector<double> grad, dfv;
    grad.resize(d);
    dfv.resize(nn);
    base_.hessian(q, xi, out);
    base_.gradient(q, xi, grad.data());
    double ef = std::exp(f_.eval(q, nullptr));
    double fv = base_.value(q, xi);
    for (int i = 0; i < nn; ++i) dfv[i] = df_[i].eval(q, nullptr);
    // e^f (F'' + df (x) F' + F' (x) df + F (df (x) df + ddf))
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) {
            double v = out[i * d + j];
            if (i < nn) v += dfv[i] * grad[j];
            if (j < nn) v += grad[i] * dfv[j];
            if (i < nn && j < nn)
                v += fv * (dfv[i] * dfv[j] + ddf_[i][j].eval(q, nullptr));
            out[i * d + j] = ef * v;
        }
}

BetaField::BetaField(const TrigForm& beta) : form(beta) {
    if (beta.degree() != 1 || beta.np() != 0)
        throw Error(ErrorKind::Precondition, "beta must be a 1-form on the torus");
    if (!beta.d().is_zero())
        throw Error(ErrorKind::NotClosed, "beta is not closed");
    n = beta.nq();
    std::vector<TrigPoly> comps(n, TrigPoly(n, 0));
    for (const auto& [b, c] : beta.terms()) comps[b[0]] = comps[b[0]] + c;
    for (int i = 0; i < n; ++i) {
        comp.emplace_back(comps[i]);
        std::vector<CompiledPoly> row;
        for (int j = 0; j < n; ++j) row.emplace_back(comps[i].derivative_q(j));
        jac.push_back(std::move(row));
    }
}

void BetaField::eval(const double* q, double* out) const {
    for (int i = 0; i < n; ++i) out[i] = comp[i].eval(q, nullptr);
}

void BetaField::eval_jac(const double* q, double* out) const {
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) out[i * n + j] = jac[i][j].eval(q, nullptr);
}

// --- generic zero search -----------------------------------------------------

namespace {

struct MapSystem {
    int n = 0, m = 0; // torus and fiber dimensions of the domain
    std::function<void(const double* x, double* out)> map;
    std::function<void(const double* x, double* jac)> jac; // row-major
    int dim() const { return n + m; }
};

double map_norm(const MapSystem& sys, const double* x, std::vector<double>& buf) {
    sys.map(x, buf.data());
    double acc = 0;
    for (int i = 0; i < sys.dim(); ++i) acc += buf[i] * buf[i];
    return std::sqrt(acc);
}

std::optional<std::vector<double>> newton_solve(const MapSystem& sys,
                                                std::vector<double> x,
                                                const SearchOptions& opts,
                                                double xi_limit) {
    const int d = sys.dim();
    thread_local std::vector<double> g, jac, buf;
    g.resize(d);
    jac.resize(d * d);
    buf.resize(d);
    Eigen::Matrix<double, Eigen::Dynamic, 1, 0, 16, 1> step(d);
    double norm = map_norm(sys, x.data(), g);
    for (int it = 0; it < opts.max_iter; ++it) {
        if (norm < opts.tol) return x;
        sys.map(x.data(), g.data());
        sys.jac(x.data(), jac.data());
        Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, 0, 16, 16> jm(d, d);
        Eigen::Matrix<double, Eigen::Dynamic, 1, 0, 16, 1> gv(d);
        for (int i = 0; i < d; ++i) {
            gv(i) = -g[i];
            for (int j = 0; j < d; ++j) jm(i, j) = jac[i * d + j];
        }
        step = jm.partialPivLu().solve(gv);
        if (!step.allFinite() || step.norm() > 1e4) return std::nullopt;
        double factor = 1.0;
        bool accepted = false;
        thread_local std::vector<double> trial;
        for (int back = 0; back < 6; ++back) {
            trial = x;
            for (int i = 0; i < d; ++i) trial[i] += factor * step(i);
            double trial_norm = map_norm(sys, trial.data(), buf);
            if (trial_norm < norm || trial_norm < opts.tol) {
                x = trial;
                norm = trial_norm;
                accepted = true;
                break;
            }
            factor *= 0.5;
        }
        if (!accepted) return std::nullopt;
        for (int j = sys.n; j < d; ++j)
            if (std::abs(x[j]) > xi_limit) return std::nullopt;
    }
    return norm < opts.tol ? std::optional(x) : std::nullopt;
}

struct Lattice {
    std::vector<std::vector<double>> points;
    std::vector<int> shape; // per axis point count
    int n = 0, m = 0;
};

Lattice make_lattice(int n, int m, double xi_radius, const SearchOptions& opts) {
    Lattice lat;
    lat.n = n;
    lat.m = m;
    lat.shape.assign(n, opts.q_seeds);
    for (int j = 0; j < m; ++j) lat.shape.push_back(opts.xi_seeds);
    std::vector<double> x(n + m, 0.0);
    std::function<void(int)> rec = [&](int axis) {
        if (axis == n + m) {
            lat.points.push_back(x);
            return;
        }
        if (axis < n) {
            for (int i = 0; i < opts.q_seeds; ++i) {
                x[axis] = kTwoPi * i / opts.q_seeds;
                rec(axis + 1);
            }
        } else {
            for (int i = 0; i < opts.xi_seeds; ++i) {
                x[axis] = opts.xi_seeds == 1
                              ? 0.0
                              : -xi_radius + 2.0 * xi_radius * i / (opts.xi_seeds - 1);
                rec(axis + 1);
            }
        }
    };
    rec(0);
    return lat;
}

// Sign-change cells of the lattice without a located zero nearby.
std::vector<SearchWarning> sign_change_warnings(const MapSystem& sys, const Lattice& lat,
                                                const std::vector<BetaCriticalPoint>& pts,
                                                const SearchOptions& opts,
                                                double xi_radius) {
    const int d = sys.dim();
    std::vector<double> values(lat.points.size() * d);
    for (std::size_t i = 0; i < lat.points.size(); ++i)
        sys.map(lat.points[i].data(), values.data() + i * d);

    // stride layout matches make_lattice recursion (last axis fastest)
    std::vector<long> strides(d, 1);
    for (int a = d - 2; a >= 0; --a) strides[a] = strides[a + 1] * lat.shape[a + 1];

    std::vector<SearchWarning> warnings;
    double cell_q = kTwoPi / opts.q_seeds;
    double cell_xi = opts.xi_seeds > 1 ? 2.0 * xi_radius / (opts.xi_seeds - 1) : 0.0;
    double diam2 = 0;
    for (int a = 0; a < d; ++a) {
        double h = a < lat.n ? cell_q : cell_xi;
        diam2 += h * h;
    }

    std::vector<int> idx(d, 0);
    std::function<void(int)> rec = [&](int axis) {
        if (axis == d) {
            // corners of the cell starting at idx
            bool all_change = true;
            for (int comp = 0; comp < d && all_change; ++comp) {
                bool pos = false, neg = false;
                for (int corner = 0; corner < (1 << d); ++corner) {
                    long flat = 0;
                    bool valid = true;
                    for (int a = 0; a < d; ++a) {
                        int ia = idx[a] + ((corner >> a) & 1);
                        if (a < lat.n) ia %= lat.shape[a];
                        else if (ia >= lat.shape[a]) { valid = false; break; }
                        flat += ia * strides[a];
                    }
                    if (!valid) continue;
                    double v = values[flat * d + comp];
                    pos |= v >= 0;
                    neg |= v <= 0;
                }
                all_change = pos && neg;
            }
            if (all_change) {
                std::vector<double> center(d);
                for (int a = 0; a < d; ++a) {
                    double h = a < lat.n ? cell_q : cell_xi;
                    double base = a < lat.n ? cell_q * idx[a]
                                            : -xi_radius + cell_xi * idx[a];
                    center[a] = base + 0.5 * h;
                }
                bool near = false;
                for (const auto& p : pts) {
                    std::vector<double> loc = p.q;
                    loc.insert(loc.end(), p.xi.begin(), p.xi.end());
                    if (torus_distance2(center, loc, lat.n) < 2.25 * diam2) {
                        near = true;
                        break;
                    }
                }
                if (!near)
                    warnings.push_back(
                        {center, "sign change without a converged zero nearby"});
            }
            return;
        }
        int limit = axis < lat.n ? lat.shape[axis] : lat.shape[axis] - 1;
        for (int i = 0; i < limit; ++i) {
            idx[axis] = i;
            rec(axis + 1);
        }
    };
    rec(0);
    return warnings;
}

CriticalSearch search_zeros(const MapSystem& sys, double xi_radius,
                            const SearchOptions& opts,
                            const std::function<double(const double*)>& f_value) {
    CriticalSearch out;
    Lattice lat = make_lattice(sys.n, sys.m, xi_radius, opts);
    const int d = sys.dim();
    const double xi_limit = 3.0 * std::max(xi_radius, 1.0);

    std::vector<double> g(d);
    for (const auto& seed : lat.points) {
        auto sol = newton_solve(sys, seed, opts, xi_limit);
        if (!sol) continue;
        std::vector<double> x = *sol;
        for (int i = 0; i < sys.n; ++i) x[i] = wrap_angle(x[i]);
        bool dup = false;
        for (auto& p : out.points) {
            std::vector<double> loc = p.q;
            loc.insert(loc.end(), p.xi.begin(), p.xi.end());
            if (torus_distance2(x, loc, sys.n) < opts.dedup_radius * opts.dedup_radius) {
                dup = true;
                break;
            }
        }
        if (dup) continue;

        BetaCriticalPoint p;
        p.q.assign(x.begin(), x.begin() + sys.n);
        p.xi.assign(x.begin() + sys.n, x.end());
        p.residual = map_norm(sys, x.data(), g);
        p.f_value = f_value(x.data());
        double eps = opts.region_epsilon;
        p.region = p.f_value > eps    ? Region::XPlus
                   : p.f_value < -eps ? Region::XMinus
                                      : Region::XZero;
        std::vector<double> jac(d * d);
        sys.jac(x.data(), jac.data());
        Eigen::Map<Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>
            jm(jac.data(), d, d);
        Eigen::JacobiSVD<Eigen::MatrixXd> svd(jm);
        p.min_jacobian_sv = svd.singularValues()(d - 1);
        p.transversal = p.min_jacobian_sv > opts.transversality_tol;
        Eigen::MatrixXd sym = 0.5 * (jm + jm.transpose());
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(sym);
        int neg = 0;
        for (int i = 0; i < d; ++i)
            if (es.eigenvalues()(i) < 0) ++neg;
        p.index = neg;
        out.points.push_back(std::move(p));
    }

    out.warnings = sign_change_warnings(sys, lat, out.points, opts, xi_radius);
    bool separated = true;
    for (std::size_t i = 0; i < out.points.size(); ++i)
        for (std::size_t j = i + 1; j < out.points.size(); ++j) {
            std::vector<double> a = out.points[i].q, b = out.points[j].q;
            a.insert(a.end(), out.points[i].xi.begin(), out.points[i].xi.end());
            b.insert(b.end(), out.points[j].xi.begin(), out.points[j].xi.end());
            separated &= torus_distance2(a, b, sys.n) >
                         100.0 * opts.dedup_radius * opts.dedup_radius;
        }
    bool transversal = true;
    for (const auto& p : out.points) transversal &= p.transversal;
    out.exact_on_grid = out.warnings.empty() && separated && transversal;
    return out;
}

MapSystem dbeta_system(const FamilyEval& family, const BetaField& beta) {
    if (beta.n != family.n())
        throw Error(ErrorKind::Precondition, "beta and family dimensions disagree");
    MapSystem sys;
    sys.n = family.n();
    sys.m = family.m();
    const int n = sys.n, d = sys.dim();
    sys.map = [&family, &beta, n, d](const double* x, double* out) {
        const double* q = x;
        const double* xi = x + n;
        thread_local std::vector<double> bv;
        bv.resize(n);
        family.gradient(q, xi, out);
        beta.eval(q, bv.data());
        double f = family.value(q, xi);
        for (int i = 0; i < n; ++i) out[i] -= f * bv[i];
        (void)d;
    };
    sys.jac = [&family, &beta, n, d](const double* x, double* out) {
        const double* q = x;
        const double* xi = x + n;
        thread_local std::vector<double> g, bv, bj;
        g.resize(d);
        bv.resize(n);
        bj.resize(n * n);
        family.hessian(q, xi, out);
        family.gradient(q, xi, g.data());
        beta.eval(q, bv.data());
        beta.eval_jac(q, bj.data());
        double f = family.value(q, xi);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < d; ++j) {
                out[i * d + j] -= g[j] * bv[i];
                if (j < n) out[i * d + j] -= f * bj[i * n + j];
            }
    };
    return sys;
}

} // namespace

CriticalSearch beta_critical_points(const FamilyEval& family, const BetaField& beta,
                                    const SearchOptions& opts) {
    MapSystem sys = dbeta_system(family, beta);
    auto fval = [&family](const double* x) {
        return family.value(x, x + family.n());
    };
    return search_zeros(sys, family.seed_radius(), opts, fval);
}

// --- the generated Lagrangian ------------------------------------------------

LagrangianResult lagrangian_from_family(const FamilyEval& family, const BetaField& beta,
                                        const SearchOptions& opts) {
    const int n = family.n(), m = family.m();
    LagrangianResult out;

    // fiber criticality: solve d_xi F = 0 over each base grid point
    MapSystem fiber;
    fiber.n = 0;
    fiber.m = m;
    std::vector<double> q_hold(n, 0.0);
    const double* qh = q_hold.data();
    fiber.map = [&family, qh, n, m](const double* xi, double* out) {
        std::vector<double> g(n + m);
        family.gradient(qh, xi, g.data());
        std::copy(g.begin() + n, g.end(), out);
    };
    fiber.jac = [&family, qh, n, m](const double* xi, double* out) {
        const int d = n + m;
        std::vector<double> h(d * d);
        family.hessian(qh, xi, h.data());
        for (int i = 0; i < m; ++i)
            for (int j = 0; j < m; ++j) out[i * m + j] = h[(n + i) * d + (n + j)];
    };

    Lattice qlat = make_lattice(n, 0, 0.0, opts);
    const double r = family.seed_radius();

    auto fiber_solutions = [&](const double* q) {
        std::vector<std::vector<double>> sols;
        if (m == 0) {
            sols.push_back({});
            return sols;
        }
        std::copy(q, q + n, q_hold.begin());
        for (int i = 0; i < opts.xi_seeds; ++i) {
            std::vector<double> xi(m, 0.0);
            for (int j = 0; j < m; ++j)
                xi[j] = opts.xi_seeds == 1 ? 0.0
                                           : -r + 2.0 * r * ((i + 5 * j) % opts.xi_seeds) /
                                                     (opts.xi_seeds - 1);
            auto sol = newton_solve(fiber, xi, opts, 3.0 * std::max(r, 1.0));
            if (!sol) continue;
            bool dup = false;
            for (const auto& s : sols) {
                double dist = 0;
                for (int j = 0; j < m; ++j) dist += (s[j] - (*sol)[j]) * (s[j] - (*sol)[j]);
                if (dist < opts.dedup_radius * opts.dedup_radius) dup = true;
            }
            if (!dup) sols.push_back(*sol);
        }
        return sols;
    };

    std::vector<std::pair<std::vector<double>, std::vector<double>>> seeds; // (q, xi)
    for (const auto& q : qlat.points) {
        for (const auto& xi : fiber_solutions(q.data())) {
            // fiber Hessian nondegeneracy at the sample
            bool flagged = false;
            if (m > 0) {
                std::copy(q.begin(), q.end(), q_hold.begin());
                std::vector<double> h(m * m);
                fiber.jac(xi.data(), h.data());
                Eigen::Map<Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic,
                                         Eigen::RowMajor>>
                    hm(h.data(), m, m);
                Eigen::JacobiSVD<Eigen::MatrixXd> svd(hm);
                if (svd.singularValues()(m - 1) < opts.transversality_tol) {
                    ++out.flagged_samples;
                    flagged = true;
                }
            }
            if (flagged) continue;
            LagrangianSample s;
            s.q = q;
            s.xi = xi;
            s.p.resize(n);
            std::vector<double> g(n + m), bv(n);
            family.gradient(q.data(), xi.data(), g.data());
            beta.eval(q.data(), bv.data());
            double f = family.value(q.data(), xi.data());
            for (int i = 0; i < n; ++i) s.p[i] = g[i] - f * bv[i];
            out.samples.push_back(s);
            seeds.emplace_back(q, xi);
        }
    }

    // geometric intersection count: Newton on the full system, seeded only
    // from the sampled Lagrangian (sign changes of p show up as nearby seeds)
    MapSystem full = dbeta_system(family, beta);
    std::vector<std::vector<double>> zeros;
    for (const auto& [q, xi] : seeds) {
        std::vector<double> x = q;
        x.insert(x.end(), xi.begin(), xi.end());
        auto sol = newton_solve(full, x, opts, 3.0 * std::max(r, 1.0));
        if (!sol) continue;
        std::vector<double> z = *sol;
        for (int i = 0; i < n; ++i) z[i] = wrap_angle(z[i]);
        bool dup = false;
        for (const auto& prev : zeros)
            if (torus_distance2(prev, z, n) < opts.dedup_radius * opts.dedup_radius)
                dup = true;
        if (!dup) zeros.push_back(z);
    }
    out.intersection_count = static_cast<int>(zeros.size());

    out.beta_critical_count =
        static_cast<int>(beta_critical_points(family, beta, opts).points.size());
    if (out.intersection_count != out.beta_critical_count)
        throw Error(ErrorKind::Degenerate,
                    "geometric intersection count (" +
                        std::to_string(out.intersection_count) +
                        ") disagrees with the beta-critical count (" +
                        std::to_string(out.beta_critical_count) + ")");
    return out;
}

// --- the G / H / gamma pipeline ---------------------------------------------

PipelineEvaluator::PipelineEvaluator(const FamilyEval& family, const BetaField& beta,
                                     double epsilon, double delta)
    : family_(family), beta_(beta), eps_(epsilon), delta_(delta) {}

int PipelineEvaluator::dim() const { return family_.dim(); }

double PipelineEvaluator::F(const double* x) const {
    return family_.value(x, x + family_.n());
}

double PipelineEvaluator::G(const double* x) const {
    double f = F(x);
    double chi, dchi;
    chi_eval(f / eps_, chi, dchi);
    return std::sqrt(f * f + delta_ * delta_ * chi);
}

double PipelineEvaluator::H(const double* x) const { return std::log(G(x)); }

void PipelineEvaluator::gamma(const double* x, double* out) const {
    const int n = family_.n(), d = family_.dim();
    double f = F(x);
    double chi, dchi;
    chi_eval(f / eps_, chi, dchi);
    double g2 = f * f + delta_ * delta_ * chi;
    double w = (f + delta_ * delta_ * dchi / (2.0 * eps_)) / g2;
    thread_local std::vector<double> grad, bv;
    grad.resize(d);
    bv.resize(n);
    family_.gradient(x, x + n, grad.data());
    beta_.eval(x, bv.data());
    for (int i = 0; i < d; ++i) out[i] = w * grad[i] - (i < n ? bv[i] : 0.0);
}

PipelineArtifacts build_pipeline(const FamilyEval& family, const BetaField& beta,
                                 double epsilon, double smoothing_delta,
                                 const SearchOptions& opts, double separation_tol) {
    if (epsilon <= 0)
        throw Error(ErrorKind::Precondition, "epsilon must be positive");
    const int n = family.n(), m = family.m(), d = family.dim();
    PipelineArtifacts art;
    art.epsilon = epsilon;
    art.delta = smoothing_delta * epsilon;
    art.eval = std::make_shared<PipelineEvaluator>(family, beta, epsilon, art.delta);

    // epsilon separation condition on the seed lattice
    Lattice lat = make_lattice(n, m, family.seed_radius(), opts);
    MapSystem dbeta = dbeta_system(family, beta);
    std::vector<double> g(d), grad(d);
    for (const auto& x : lat.points) {
        double f = family.value(x.data(), x.data() + n);
        if (std::abs(f) >= 2.0 * epsilon) {
            art.max_G_vs_absF =
                std::max(art.max_G_vs_absF, std::abs(art.eval->G(x.data()) - std::abs(f)));
        } else {
            dbeta.map(x.data(), g.data());
            family.gradient(x.data(), x.data() + n, grad.data());
            double ng = 0, ndf = 0;
            for (int i = 0; i < d; ++i) {
                ng += g[i] * g[i];
                ndf += grad[i] * grad[i];
            }
            if (std::sqrt(ng) <= separation_tol || std::sqrt(ndf) <= separation_tol)
                throw Error(ErrorKind::SeparationFailed,
                            "epsilon condition fails on {|F| < 2 eps}: d_beta F or dF "
                            "is small there; choose a smaller epsilon");
        }
        double gv = art.eval->G(x.data());
        art.min_G = art.min_G == 0 ? gv : std::min(art.min_G, gv);
    }
    if (art.min_G <= 0)
        throw std::logic_error("G must be positive");

    // zeros of gamma, Newton with finite-difference Jacobians
    auto eval_ptr = art.eval;
    MapSystem gamma_sys;
    gamma_sys.n = n;
    gamma_sys.m = m;
    gamma_sys.map = [eval_ptr](const double* x, double* out) { eval_ptr->gamma(x, out); };
    gamma_sys.jac = [eval_ptr, d](const double* x, double* out) {
        const double h = 1e-6;
        thread_local std::vector<double> xp, gp, gm;
        xp.assign(x, x + d);
        gp.resize(d);
        gm.resize(d);
        for (int j = 0; j < d; ++j) {
            xp[j] = x[j] + h;
            eval_ptr->gamma(xp.data(), gp.data());
            xp[j] = x[j] - h;
            eval_ptr->gamma(xp.data(), gm.data());
            xp[j] = x[j];
            for (int i = 0; i < d; ++i) out[i * d + j] = (gp[i] - gm[i]) / (2.0 * h);
        }
    };
    SearchOptions gopts = opts;
    gopts.region_epsilon = epsilon;
    auto fval = [&family, n](const double* x) { return family.value(x, x + n); };
    auto gz = search_zeros(gamma_sys, family.seed_radius(), gopts, fval);
    art.gamma_zeros = gz.points;

    SearchOptions dopts = opts;
    dopts.region_epsilon = epsilon;
    art.dbeta_zeros = beta_critical_points(family, beta, dopts).points;

    // bijection between gamma zeros off X0 and the d_beta F zeros
    std::vector<const BetaCriticalPoint*> off_x0;
    for (const auto& p : art.gamma_zeros)
        if (p.region != Region::XZero) off_x0.push_back(&p);
        else ++art.x0_extra_zeros;
    art.bijection_ok = off_x0.size() == art.dbeta_zeros.size();
    std::vector<bool> used(art.dbeta_zeros.size(), false);
    for (const auto* p : off_x0) {
        double best = std::numeric_limits<double>::infinity();
        int best_j = -1;
        std::vector<double> a = p->q;
        a.insert(a.end(), p->xi.begin(), p->xi.end());
        for (std::size_t j = 0; j < art.dbeta_zeros.size(); ++j) {
            if (used[j]) continue;
            std::vector<double> b = art.dbeta_zeros[j].q;
            b.insert(b.end(), art.dbeta_zeros[j].xi.begin(), art.dbeta_zeros[j].xi.end());
            double dist = std::sqrt(torus_distance2(a, b, n));
            if (dist < best) {
                best = dist;
                best_j = static_cast<int>(j);
            }
        }
        if (best_j < 0 || best > 1e-6) {
            art.bijection_ok = false;
            if (best_j >= 0) art.max_pairing_distance = std::max(art.max_pairing_distance, best);
        } else {
            used[best_j] = true;
            art.max_pairing_distance = std::max(art.max_pairing_distance, best);
        }
    }

    // closedness of gamma (finite differences at a lattice subsample)
    std::vector<double> jbuf(d * d);
    for (std::size_t k = 0; k < lat.points.size(); k += std::max<std::size_t>(1, lat.points.size() / 64)) {
        gamma_sys.jac(lat.points[k].data(), jbuf.data());
        for (int i = 0; i < d; ++i)
            for (int j = 0; j < i; ++j)
                art.max_curl_residual = std::max(
                    art.max_curl_residual, std::abs(jbuf[i * d + j] - jbuf[j * d + i]));
    }

    // periods along the torus cycles at xi = 0: gamma carries -[beta]
    const int quad_n = 512;
    for (int axis = 0; axis < n; ++axis) {
        double gsum = 0, bsum = 0;
        std::vector<double> x(d, 0.0), gv(d), bv(n);
        for (int k = 0; k < quad_n; ++k) {
            std::fill(x.begin(), x.end(), 0.0);
            x[axis] = kTwoPi * k / quad_n;
            art.eval->gamma(x.data(), gv.data());
            beta.eval(x.data(), bv.data());
            gsum += gv[axis];
            bsum += bv[axis];
        }
        gsum *= kTwoPi / quad_n;
        bsum *= kTwoPi / quad_n;
        art.max_period_mismatch =
            std::max(art.max_period_mismatch, std::abs(gsum + bsum));
    }
    return art;
}

// --- the intersection bound --------------------------------------------------

std::vector<long long> integral_class_of(const TrigForm& beta) {
    if (beta.degree() != 1 || beta.np() != 0)
        throw Error(ErrorKind::Precondition, "beta must be a 1-form on the torus");
    const int n = beta.nq();
    std::vector<Rat> cls(n, Rat(0));
    for (const auto& [b, c] : beta.terms()) cls[b[0]] += c.torus_mean();
    BigInt l = 1;
    for (const auto& c : cls) {
        BigInt den = boost::multiprecision::denominator(c);
        l = boost::multiprecision::lcm(l, den);
    }
    std::vector<long long> out(n);
    for (int i = 0; i < n; ++i) {
        Rat scaled = cls[i] * Rat(l);
        out[i] = boost::multiprecision::numerator(scaled).convert_to<long long>();
    }
    return out;
}

TheoremReport theorem_bound_report(const FamilyEval& family, const TrigForm& beta,
                                   const CellComplex& complex,
                                   const std::optional<Cocycle>& cocycle, Field field,
                                   const SearchOptions& opts) {
    TheoremReport rep;
    rep.field = field;
    const int n = family.n();
    if (beta.nq() != n)
        throw Error(ErrorKind::Precondition, "beta lives on the wrong torus");

    auto cls = integral_class_of(beta);
    Cocycle used;
    if (cocycle) {
        used = *cocycle;
        if (complex.cells(1) != static_cast<int>(cls.size()))
            throw Error(ErrorKind::PeriodMismatch,
                        "class comparison needs the standard one-vertex torus complex "
                        "(one edge per coordinate)");
        for (int i = 0; i < n; ++i)
            if (used.edge_values[i] != cls[i])
                throw Error(ErrorKind::PeriodMismatch,
                            "cocycle does not match the class of beta");
    } else {
        if (complex.cells(1) != n)
            throw Error(ErrorKind::PeriodMismatch,
                        "cannot derive a cocycle: complex has " +
                            std::to_string(complex.cells(1)) + " edges, beta has " +
                            std::to_string(n) + " periods");
        used.edge_values = cls;
    }
    rep.cocycle_used = used.edge_values;

    BetaField bf(beta);
    auto search = beta_critical_points(family, bf, opts);
    rep.count = static_cast<int>(search.points.size());
    rep.points = search.points;

    // k > 0 normalization: when the fiber quadratic has index 0 (or there is
    // no fiber at all), recount on the stabilization by one negative square
    // and require agreement.
    const auto* gf = dynamic_cast<const GeneratingFamily*>(&family);
    if (gf && (gf->m() == 0 || gf->quad_index() == 0)) {
        StabilizedFamily stab(family, -1);
        auto stab_search = beta_critical_points(stab, bf, opts);
        if (static_cast<int>(stab_search.points.size()) != rep.count)
            throw std::logic_error("stabilization changed the beta-critical count");
        rep.auto_stabilized = true;
    }

    auto betti = novikov_betti(complex, used, field);
    rep.betti = betti.betti;
    rep.rank = betti.total();
    rep.satisfied = rep.count >= rep.rank;
    return rep;
}

} // namespace lcs
