#pragma once

// Fixed-step RK4 flows for the (non-conservative) conformal Hamiltonian
// dynamics, plus the fiber-translation displaceability experiment.

#include <functional>
#include <vector>

#include "lcs/conformal.hpp"
#include "lcs/forms.hpp"

namespace lcs {

// Right-hand side of dx/dt = f(t, x); time dependence is allowed so the
// Moser field fits the same integrator.
struct OdeField {
    int dim = 0;
    std::function<void(double t, const double* x, double* dx)> f;
};

OdeField ode_from(const SolvedField& field);

struct FlowConfig {
    OdeField field;
    double t_end = 1.0;
    double dt = 1e-3;
    std::vector<std::vector<double>> seeds;
    // p-box for truncation; q coordinates are periodic and never truncate.
    int nq = 0;
    double p_min = -4.0, p_max = 4.0;
};

struct Trajectory {
    std::vector<double> times;
    std::vector<std::vector<double>> states;
    bool exited_box = false;
};

// One classical RK4 step.
void rk4_step(const OdeField& field, double t, double dt, std::vector<double>& x);

std::vector<Trajectory> integrate_flow(const FlowConfig& cfg);

struct DisplacementSample {
    double t = 0;
    double min_distance = 0;          // min over base points of |p(t;q)|
    std::vector<double> argmin_point; // base point attaining it
};

struct DisplacementReport {
    std::vector<DisplacementSample> samples;
    double overall_min = 0;
};

// Flow of the Lee field of T*_beta T^n applied to the zero section; distance
// is measured in the flat metric on the p coordinates. Errors when beta
// vanishes at a sample point (the displaceability hypothesis fails).
DisplacementReport displaceability_check(const TrigForm& beta, double t_max,
                                         int samples, int q_grid = 64,
                                         double dt = 1e-3);

} // namespace lcs
