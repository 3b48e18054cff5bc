#pragma once

// beta-generating families F on T^n x R^m, quadratic at infinity: location of
// beta-critical points (zeros of dF - F beta), the generated Lagrangian with
// its zero-section intersection count, the smoothed G / H = log G / gamma =
// dH - beta pipeline, and the intersection-bound report.

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "lcs/cell_complex.hpp"
#include "lcs/forms.hpp"
#include "lcs/novikov.hpp"

namespace lcs {

// Pointwise family data: value, gradient and Hessian in the (q, xi) variables.
class FamilyEval {
public:
    virtual ~FamilyEval() = default;
    virtual int n() const = 0;
    virtual int m() const = 0;
    virtual double value(const double* q, const double* xi) const = 0;
    virtual void gradient(const double* q, const double* xi, double* out) const = 0;
    virtual void hessian(const double* q, const double* xi, double* out) const = 0;
    // Suggested |xi| seeding radius (zeros cannot live outside it).
    virtual double seed_radius() const { return 1.0; }
    int dim() const { return n() + m(); }
};

struct CoreTerm {
    std::vector<int> freq; // length n
    bool sine = false;
    double coeff = 0;
    std::vector<int> xi_pow; // length m
};

// F(q, xi) = xi^T Q xi + sum_t coeff_t trig_t(q) xi^{pow_t} rho(|xi|^2/R^2)
// with rho the standard smooth bump (1 at 0, support |xi| <= R).
class GeneratingFamily final : public FamilyEval {
public:
    GeneratingFamily(int n, int m, std::vector<std::vector<double>> quad,
                     double ball_radius, std::vector<CoreTerm> core);

    int n() const override { return n_; }
    int m() const override { return m_; }
    double value(const double* q, const double* xi) const override;
    void gradient(const double* q, const double* xi, double* out) const override;
    void hessian(const double* q, const double* xi, double* out) const override;
    double seed_radius() const override { return m_ == 0 ? 0.0 : ball_radius_; }

    int quad_index() const; // negative eigenvalues of Q
    double ball_radius() const { return ball_radius_; }
    const std::vector<std::vector<double>>& quad() const { return quad_; }
    const std::vector<CoreTerm>& core() const { return core_; }

private:
    int n_, m_;
    std::vector<std::vector<double>> quad_;
    double ball_radius_;
    std::vector<CoreTerm> core_;

    void validate() const;
};

// F(q, xi, xi') = F(q, xi) + sign * xi'^2 (one extra fiber variable).
class StabilizedFamily final : public FamilyEval {
public:
    StabilizedFamily(const FamilyEval& base, int sign = 1);
    int n() const override { return base_.n(); }
    int m() const override { return base_.m() + 1; }
    double value(const double* q, const double* xi) const override;
    void gradient(const double* q, const double* xi, double* out) const override;
    void hessian(const double* q, const double* xi, double* out) const override;
    double seed_radius() const override { return std::max(base_.seed_radius(), 1.0); }

private:
    const FamilyEval& base_;
    double sign_;
};

// e^{f(q)} F for a trig polynomial f on the torus.
class GaugedFamily final : public FamilyEval {
public:
    GaugedFamily(const FamilyEval& base, const TrigPoly& f);
    int n() const override { return base_.n(); }
    int m() const override { return base_.m(); }
    double value(const double* q, const double* xi) const override;
    void gradient(const double* q, const double* xi, double* out) const override;
    void hessian(const double* q, const double* xi, double* out) const override;
    double seed_radius() const override { return base_.seed_radius(); }

private:
    const FamilyEval& base_;
    CompiledPoly f_;
    std::vector<CompiledPoly> df_;
    std::vector<std::vector<CompiledPoly>> ddf_;
};

// Compiled closed 1-form on the torus with partial derivatives.
struct BetaField {
    int n = 0;
    TrigForm form;
    std::vector<CompiledPoly> comp;
    std::vector<std::vector<CompiledPoly>> jac; // jac[i][j] = d beta_i / d q_j

    explicit BetaField(const TrigForm& beta);
    void eval(const double* q, double* out) const;
    void eval_jac(const double* q, double* out) const; // n x n row-major
};

enum class Region { XPlus, XMinus, XZero };
inline const char* region_name(Region r) {
    switch (r) {
        case Region::XPlus: return "X+";
        case Region::XMinus: return "X-";
        case Region::XZero: return "X0";
    }
    return "?";
}

struct BetaCriticalPoint {
    std::vector<double> q;
    std::vector<double> xi;
    double residual = 0;
    double f_value = 0;
    Region region = Region::XZero;
    int index = -1; // negative eigenvalues of the symmetrized Jacobian
    bool transversal = false;
    double min_jacobian_sv = 0;
};

struct SearchWarning {
    std::vector<double> cell_center;
    std::string message;
};

struct SearchOptions {
    double tol = 1e-10;
    double dedup_radius = 1e-4;
    int q_seeds = 64;
    int xi_seeds = 33;
    int max_iter = 60;
    double transversality_tol = 1e-8;
    double region_epsilon = 0.0; // region tags use this threshold
};

struct CriticalSearch {
    std::vector<BetaCriticalPoint> points;
    bool exact_on_grid = false; // all zeros transversal, separated, no warnings
    std::vector<SearchWarning> warnings;
};

CriticalSearch beta_critical_points(const FamilyEval& family, const BetaField& beta,
                                    const SearchOptions& opts = {});

struct LagrangianSample {
    std::vector<double> q, xi, p;
};

struct LagrangianResult {
    std::vector<LagrangianSample> samples;
    int intersection_count = 0;
    int beta_critical_count = 0;
    int flagged_samples = 0; // degenerate fiber Hessian, excluded with warning
};

// Sample L_F = {(q, d_q F - F beta) : d_xi F = 0} and count its intersections
// with the zero section geometrically; throws Degenerate if this disagrees
// with the beta-critical count (the two coincide for transversal data).
LagrangianResult lagrangian_from_family(const FamilyEval& family, const BetaField& beta,
                                        const SearchOptions& opts = {});

// The smoothed positive envelope G = sqrt(F^2 + delta^2 chi(F/eps)), its log,
// and gamma = dH - beta, evaluable pointwise.
class PipelineEvaluator {
public:
    PipelineEvaluator(const FamilyEval& family, const BetaField& beta, double epsilon,
                      double delta);
    double F(const double* x) const;
    double G(const double* x) const;
    double H(const double* x) const;
    void gamma(const double* x, double* out) const; // n+m components
    int dim() const;

private:
    const FamilyEval& family_;
    const BetaField& beta_;
    double eps_, delta_;
};

struct PipelineArtifacts {
    double epsilon = 0, delta = 0;
    // references the family and beta passed to build_pipeline; keep them alive
    std::shared_ptr<PipelineEvaluator> eval;
    std::vector<BetaCriticalPoint> gamma_zeros;  // regions tagged with epsilon
    std::vector<BetaCriticalPoint> dbeta_zeros;  // zeros of dF - F beta
    double min_G = 0;            // over the seed grid; must be positive
    double max_G_vs_absF = 0;    // max |G - |F|| where |F| >= 2 eps
    bool bijection_ok = false;   // gamma zeros on X+ u X- <-> dbeta zeros
    double max_pairing_distance = 0;
    int x0_extra_zeros = 0;      // gamma zeros inside X0 (reported, nothing asserted)
    double max_curl_residual = 0;      // finite-difference closedness of gamma
    double max_period_mismatch = 0;    // periods of gamma vs beta on torus cycles
};

// Throws SeparationFailed when the epsilon condition (d_beta F != 0 and
// dF != 0 on {|F| < 2 eps}) fails on the grid; advises a smaller epsilon.
PipelineArtifacts build_pipeline(const FamilyEval& family, const BetaField& beta,
                                 double epsilon, double smoothing_delta = 0.1,
                                 const SearchOptions& opts = {},
                                 double separation_tol = 1e-3);

// The integral class of beta under the torus identification [c dq_i] = c e_i,
// with denominators cleared.
std::vector<long long> integral_class_of(const TrigForm& beta);

struct TheoremReport {
    int count = 0;
    int rank = 0;
    bool satisfied = false;
    std::vector<int> betti;
    Field field = Field::Rationals;
    bool auto_stabilized = false;
    std::vector<long long> cocycle_used;
    std::vector<BetaCriticalPoint> points;
};

// count = #beta-critical points, rank = sum of Novikov Betti numbers of
// (complex, cocycle); the comparison is recorded, not claimed as a theorem
// for arbitrary F. The cocycle, when omitted, is derived from the class of
// beta; when given it must match that class entrywise (PeriodMismatch).
TheoremReport theorem_bound_report(const FamilyEval& family, const TrigForm& beta,
                                   const CellComplex& complex,
                                   const std::optional<Cocycle>& cocycle, Field field,
                                   const SearchOptions& opts = {});

} // namespace lcs
