#pragma once

// Conformal symplectic structures (eta, omega) on tori and cotangent tori,
// gauge transformations, and the canonical vector fields: Hamiltonian, Lee,
// Liouville, and the contactization Reeb field.

#include <functional>
#include <optional>
#include <string>

#include "lcs/forms.hpp"

namespace lcs {

// How d_eta omega = 0 was established for a structure.
enum class ClosednessCheck { Exact, Grid };

struct ConformalStructure {
    SpaceModel space;
    TrigForm eta;   // degree 1, closed
    TrigForm omega; // degree 2, nondegenerate on the grid
    ClosednessCheck closedness = ClosednessCheck::Exact;
    double closedness_residual = 0.0;
};

// Symbolic d eta = 0 and d_eta omega = 0; nondegeneracy sampled on the grid.
ConformalStructure make_exact_structure(const SpaceModel& space, const TrigForm& eta,
                                        const TrigForm& omega,
                                        double nondeg_tol = 1e-9);

// Grid-residual closedness (for gauge images of exact structures).
ConformalStructure make_grid_structure(const SpaceModel& space, const TrigForm& eta,
                                       const TrigForm& omega, double closedness_tol,
                                       double nondeg_tol = 1e-9);

// T*_beta T^n: eta = pullback of beta, omega = d lambda_std - eta ^ lambda_std.
ConformalStructure cotangent_structure(const TrigForm& beta_base,
                                       const SpaceModel& base_space);

TrigForm tautological_form(int n); // p . dq on T*T^n

// Smallest |det omega(x)| over the grid and where it is attained.
std::pair<double, std::vector<double>> min_omega_det(const TrigForm& omega,
                                                     const SpaceModel& space);

struct GaugeOptions {
    double exp_target = 1e-12;   // certified remainder for exp(f)
    double closedness_tol = 1e-9;
    double nondeg_tol = 1e-9;
};

// (eta, omega) -> (eta + df, e^f omega) with a truncated exponential.
ConformalStructure gauge_transform(const ConformalStructure& s, const TrigPoly& f,
                                   const GaugeOptions& opts = {});

// A vector field that can always be evaluated; symbolic components are
// available whenever the defining linear system solves inside the trig class
// (constant symbolic determinant).
struct SolvedField {
    int nq = 0, np = 0;
    std::optional<VectorFieldExpr> symbolic;
    std::function<void(const double*, double*)> eval;

    int dim() const { return nq + np; }
};

// X_H -| omega = -d_eta H.
SolvedField hamiltonian_vector_field(const ConformalStructure& s, const TrigPoly& h);

// Lee field R_eta = X_{H = 1}.
SolvedField lee_vector_field(const ConformalStructure& s);

// Z -| omega = lambda; requires omega = d_eta lambda (NotPrimitive otherwise).
SolvedField liouville_vector_field(const ConformalStructure& s, const TrigForm& lambda,
                                   double primitive_tol = 1e-9);

struct IdentitiesReport {
    double lambda_lee_plus_eta_liouville = 0; // max |lambda(R) + eta(Z)| on grid
    double omega_pairing_residual = 0;        // max |omega(Z, R) - lambda(R)|
    bool cartan_exact = false;                // symbolic difference vanished
    double cartan_max_residual = 0;           // grid residual over random draws
    bool kernel_criterion_holds = false;      // ker d lambda != 0 <=> eta(Z) = -1
    int kernel_mismatches = 0;
    std::string kind;                         // "first_kind", "none", or "mixed"
};

IdentitiesReport structural_identities_report(const ConformalStructure& s,
                                              const TrigForm& lambda,
                                              int random_cases = 20,
                                              unsigned seed = 1,
                                              double tol = 1e-7);

struct ContactizationResult {
    VectorFieldExpr reeb;          // on M x R_z; z is the last coordinate
    bool identities_exact = false; // alpha(R) = 1 and R -| d alpha = 0 symbolically
    double alpha_r_residual = 0;   // grid residual of alpha(R) - 1
    double dalpha_r_residual = 0;  // grid residual of R -| d alpha
    double min_contact_volume = 0; // min |alpha ^ (d alpha)^n| on the grid
};

// alpha = dz - z eta - lambda on M x R; R = (1 + lambda(R_eta)) dz - R_eta.
ContactizationResult contactization_reeb(const ConformalStructure& s,
                                         const TrigForm& lambda,
                                         double contact_tol = 1e-9);

} // namespace lcs
