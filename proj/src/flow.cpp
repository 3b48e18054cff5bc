#include "lcs/flow.hpp"

#include <cmath>

namespace lcs {

OdeField ode_from(const SolvedField& field) {
    OdeField f;
    f.dim = field.dim();
    auto eval = field.eval;
    f.f = [eval](double, const double* x, double* dx) { eval(x, dx); };
    return f;
}

void rk4_step(const OdeField& field, double t, double dt, std::vector<double>& x) {
    const int d = field.dim;
    thread_local std::vector<double> k1, k2, k3, k4, tmp;
    k1.resize(d);
    k2.resize(d);
    k3.resize(d);
    k4.resize(d);
    tmp.resize(d);
    field.f(t, x.data(), k1.data());
    for (int i = 0; i < d; ++i) tmp[i] = x[i] + 0.5 * dt * k1[i];
    field.f(t + 0.5 * dt, tmp.data(), k2.data());
    for (int i = 0; i < d; ++i) tmp[i] = x[i] + 0.5 * dt * k2[i];
    field.f(t + 0.5 * dt, tmp.data(), k3.data());
    for (int i = 0; i < d; ++i) tmp[i] = x[i] + dt * k3[i];
    field.f(t + dt, tmp.data(), k4.data());
    for (int i = 0; i < d; ++i)
        x[i] += dt / 6.0 * (k1[i] + 2 * k2[i] + 2 * k3[i] + k4[i]);
}

std::vector<Trajectory> integrate_flow(const FlowConfig& cfg) {
    if (cfg.dt <= 0) throw Error(ErrorKind::Precondition, "dt must be positive");
    std::vector<Trajectory> out;
    out.reserve(cfg.seeds.size());
    const int d = cfg.field.dim;
    const long steps = std::lround(cfg.t_end / cfg.dt);
    for (const auto& seed : cfg.seeds) {
        if (static_cast<int>(seed.size()) != d)
            throw Error(ErrorKind::Precondition, "seed dimension mismatch");
        Trajectory traj;
        std::vector<double> x = seed;
        traj.times.push_back(0.0);
        traj.states.push_back(x);
        for (long s = 0; s < steps; ++s) {
            double t = s * cfg.dt;
            double h = std::min(cfg.dt, cfg.t_end - t);
            rk4_step(cfg.field, t, h, x);
            traj.times.push_back(t + h);
            traj.states.push_back(x);
            bool outside = false;
            for (int i = cfg.nq; i < d; ++i)
                outside |= x[i] < cfg.p_min || x[i] > cfg.p_max;
            if (outside) {
                traj.exited_box = true;
                break;
            }
        }
        out.push_back(std::move(traj));
    }
    return out;
}

DisplacementReport displaceability_check(const TrigForm& beta, double t_max,
                                         int samples, int q_grid, double dt) {
    if (beta.degree() != 1 || beta.np() != 0)
        throw Error(ErrorKind::Precondition, "beta must be a 1-form on the torus");
    if (t_max <= 0 || samples < 1)
        throw Error(ErrorKind::Precondition, "need t_max > 0 and samples >= 1");
    const int n = beta.nq();

    SpaceModel base;
    base.nq = n;
    base.q_samples = q_grid;
    auto s = cotangent_structure(beta, base);
    auto lee = lee_vector_field(s);

    // hypothesis: beta nonvanishing on the sample grid
    SpaceModel qspace;
    qspace.nq = n;
    qspace.np = 0;
    qspace.q_samples = q_grid;
    CompiledForm1 cb(beta);
    std::vector<std::vector<double>> q_points = qspace.grid();
    for (const auto& q : q_points) {
        std::vector<double> bv(n);
        cb.eval(q.data(), bv.data());
        double norm = 0;
        for (double v : bv) norm += v * v;
        if (std::sqrt(norm) < 1e-12)
            throw Error(ErrorKind::Precondition,
                        "beta vanishes at a grid point; displaceability hypothesis fails");
    }

    FlowConfig cfg;
    cfg.field = ode_from(lee);
    cfg.t_end = t_max;
    cfg.dt = std::min(dt, t_max / samples);
    cfg.nq = n;
    cfg.p_min = -1e9; // fiber translation is unbounded by design
    cfg.p_max = 1e9;
    for (const auto& q : q_points) {
        std::vector<double> x(2 * n, 0.0);
        for (int i = 0; i < n; ++i) x[i] = q[i];
        cfg.seeds.push_back(x);
    }
    auto trajectories = integrate_flow(cfg);

    DisplacementReport rep;
    rep.overall_min = std::numeric_limits<double>::infinity();
    for (int j = 1; j <= samples; ++j) {
        double t = t_max * j / samples;
        DisplacementSample sample;
        sample.t = t;
        sample.min_distance = std::numeric_limits<double>::infinity();
        for (std::size_t sidx = 0; sidx < trajectories.size(); ++sidx) {
            const auto& traj = trajectories[sidx];
            // locate the stored time closest to t
            std::size_t best = 0;
            double bd = std::numeric_limits<double>::infinity();
            for (std::size_t k = 0; k < traj.times.size(); ++k) {
                double dtk = std::abs(traj.times[k] - t);
                if (dtk < bd) {
                    bd = dtk;
                    best = k;
                }
            }
            double dist = 0;
            for (int i = n; i < 2 * n; ++i)
                dist += traj.states[best][i] * traj.states[best][i];
            dist = std::sqrt(dist);
            if (dist < sample.min_distance) {
                sample.min_distance = dist;
                sample.argmin_point = q_points[sidx];
            }
        }
        rep.overall_min = std::min(rep.overall_min, sample.min_distance);
        rep.samples.push_back(std::move(sample));
    }
    return rep;
}

} // namespace lcs
