#include "lcs/moser.hpp"

#include <Eigen/Dense>
#include <atomic>
#include <cmath>
#include <memory>
#include <sstream>
#include <thread>

namespace lcs {

namespace {

std::string point_string(const double* x, int d) {
    std::ostringstream os;
    os << "(";
    for (int i = 0; i < d; ++i) os << (i ? ", " : "") << x[i];
    os << ")";
    return os.str();
}

struct MoserData {
    int d;
    CompiledForm2 omega0;      // d_eta lambda_0
    CompiledForm2 omega_dot;   // d_eta (lambda_1 - lambda_0)
    CompiledForm1 lambda_dot;  // -(lambda_1 - lambda_0)
    CompiledForm1 eta;
    double nondeg_tol;

    // X_t at (t, x) from X_t -| omega_t = -d/dt lambda_t, i.e. A(x, t)^T X =
    // rhs with rhs = -lambda_dot; plugging into the derived Moser equation
    // omega_dot + d_eta(X -| omega) + eta(X) omega = mu omega makes the exact
    // terms cancel. Also returns mu = eta(X).
    void solve(double t, const double* x, double* out, double* mu) const {
        using SmallMat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, 0, 8, 8>;
        using SmallVec = Eigen::Matrix<double, Eigen::Dynamic, 1, 0, 8, 1>;
        double a0[64], a1[64], rhs[8], ev[8];
        omega0.eval(x, a0);
        omega_dot.eval(x, a1);
        lambda_dot.eval(x, rhs);
        eta.eval(x, ev);
        SmallMat at(d, d);
        for (int i = 0; i < d; ++i)
            for (int j = 0; j < d; ++j)
                at(i, j) = a0[j * d + i] + t * a1[j * d + i]; // transpose
        double det = at.determinant();
        if (std::abs(det) < nondeg_tol)
            throw Error(ErrorKind::NondegeneracyLost,
                        "omega_t degenerate at t = " + std::to_string(t) + ", x = " +
                            point_string(x, d));
        SmallVec rv(d);
        for (int i = 0; i < d; ++i) rv(i) = rhs[i];
        SmallVec sol = at.partialPivLu().solve(rv);
        double m = 0;
        for (int i = 0; i < d; ++i) {
            out[i] = sol(i);
            m += ev[i] * sol(i);
        }
        *mu = m;
    }
};

std::shared_ptr<MoserData> make_data(const MoserProblem& prob, double nondeg_tol) {
    if (prob.space.np != 0)
        throw Error(ErrorKind::Precondition, "Moser problems live on closed tori");
    if (prob.space.dim() > 8)
        throw Error(ErrorKind::Precondition, "Moser solver supports dimension <= 8");
    TrigForm omega0 = d_eta(prob.lambda0, prob.eta);
    TrigForm omega_dot = d_eta(prob.lambda1 - prob.lambda0, prob.eta);
    auto data = std::make_shared<MoserData>(MoserData{
        prob.space.dim(), CompiledForm2(omega0), CompiledForm2(omega_dot),
        CompiledForm1(prob.lambda0 - prob.lambda1), CompiledForm1(prob.eta),
        nondeg_tol});
    return data;
}

} // namespace

OdeField moser_field(const MoserProblem& prob, double nondeg_tol) {
    auto data = make_data(prob, nondeg_tol);
    OdeField f;
    f.dim = prob.space.dim() + 1; // trailing component accumulates f_t
    f.f = [data](double t, const double* x, double* dx) {
        double mu = 0;
        data->solve(t, x, dx, &mu);
        dx[data->d] = mu;
    };
    return f;
}

MoserReport moser_flow(const MoserProblem& prob, const MoserOptions& opts) {
    const int d = prob.space.dim();
    auto data = make_data(prob, opts.nondeg_tol);

    // nondegeneracy pre-check along the sampled path
    TrigForm omega0 = d_eta(prob.lambda0, prob.eta);
    TrigForm omega_dot = d_eta(prob.lambda1 - prob.lambda0, prob.eta);
    for (int k = 0; k < opts.path_checks; ++k) {
        double t = opts.path_checks == 1 ? 0.0 : double(k) / (opts.path_checks - 1);
        TrigForm omega_t = omega0 + omega_dot.scaled(Rat(k, std::max(1, opts.path_checks - 1)));
        auto [det, at] = min_omega_det(omega_t, prob.space);
        if (det < opts.nondeg_tol) {
            std::ostringstream os;
            os << "omega_t degenerate on the path at t = " << t << ", x = "
               << point_string(at.data(), static_cast<int>(at.size()));
            throw Error(ErrorKind::NondegeneracyLost, os.str());
        }
    }

    OdeField field = moser_field(prob, opts.nondeg_tol);

    auto flow_to_end = [&](const std::vector<double>& x0) {
        std::vector<double> x = x0;
        x.push_back(0.0); // f accumulator
        const long steps = std::lround(1.0 / opts.dt);
        for (long s = 0; s < steps; ++s) rk4_step(field, s * opts.dt, opts.dt, x);
        return x;
    };

    CompiledForm2 omega1(d_eta(prob.lambda1, prob.eta));
    CompiledForm2 omega0c(omega0);

    MoserReport rep;
    const double h = opts.fd_step;
    for (const auto& seed : prob.space.grid()) {
        auto center = flow_to_end(seed);
        // frame push-forward by central differences
        Eigen::MatrixXd dphi(d, d);
        for (int j = 0; j < d; ++j) {
            auto xp = seed, xm = seed;
            xp[j] += h;
            xm[j] -= h;
            auto fp = flow_to_end(xp);
            auto fm = flow_to_end(xm);
            for (int i = 0; i < d; ++i) dphi(i, j) = (fp[i] - fm[i]) / (2 * h);
        }
        std::vector<double> w1(d * d), w0(d * d);
        omega1.eval(center.data(), w1.data());
        omega0c.eval(seed.data(), w0.data());
        Eigen::MatrixXd m1(d, d), m0(d, d);
        for (int i = 0; i < d; ++i)
            for (int j = 0; j < d; ++j) {
                m1(i, j) = w1[i * d + j];
                m0(i, j) = w0[i * d + j];
            }
        Eigen::MatrixXd pulled = dphi.transpose() * m1 * dphi;
        double ef = std::exp(center[d]);
        double res = (pulled - ef * m0).cwiseAbs().maxCoeff();

        MoserSeedResult r;
        r.start = seed;
        r.end.assign(center.begin(), center.begin() + d);
        r.f_end = center[d];
        r.residual = res;
        rep.max_residual = std::max(rep.max_residual, res);
        rep.seeds.push_back(std::move(r));
    }
    return rep;
}

} // namespace lcs
