#pragma once

// Moser's method for exact paths of conformal symplectic structures on the
// torus: omega_t = d_eta lambda_t with lambda_t = (1-t) lambda_0 + t lambda_1.
// X_t -| omega_t = d/dt lambda_t, mu_t = eta(X_t); the flow of X_t with the
// accumulated log-conformal factor f_t satisfies phi_t^* omega_t = e^{f_t}
// omega_0 up to discretization error.

#include <vector>

#include "lcs/flow.hpp"
#include "lcs/forms.hpp"

namespace lcs {

struct MoserProblem {
    SpaceModel space; // torus model (np = 0)
    TrigForm eta;
    TrigForm lambda0;
    TrigForm lambda1;
};

struct MoserOptions {
    double dt = 1e-3;
    double fd_step = 1e-3;     // frame push-forward finite difference
    double nondeg_tol = 1e-9;  // abort tolerance for det omega_t
    int path_checks = 11;      // nondegeneracy pre-check samples in t
};

struct MoserSeedResult {
    std::vector<double> start;
    std::vector<double> end;
    double f_end = 0;      // accumulated integral of mu_t
    double residual = 0;   // max_{i<j} |omega_1(Dphi e_i, Dphi e_j) - e^f omega_0(e_i, e_j)|
};

struct MoserReport {
    std::vector<MoserSeedResult> seeds;
    double max_residual = 0;
};

// The time-dependent Moser field (position + accumulated f as last state
// component). Exposed so tests can probe X_t directly.
OdeField moser_field(const MoserProblem& prob, double nondeg_tol = 1e-9);

MoserReport moser_flow(const MoserProblem& prob, const MoserOptions& opts = {});

} // namespace lcs
