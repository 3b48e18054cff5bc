#pragma once

// Differential forms on T^n and T*T^n with TrigPoly coefficients, exact under
// wedge, exterior derivative and interior products. Basis covectors are
// indexed 0..nq-1 for dq_i and nq..nq+np-1 for dp_j.

#include <functional>
#include <map>
#include <optional>
#include <vector>

#include "lcs/trig.hpp"

namespace lcs {

struct SpaceModel {
    int nq = 1;
    int np = 0;
    double p_min = -4.0;
    double p_max = 4.0;
    int q_samples = 32;
    int p_samples = 5;

    int dim() const { return nq + np; }
    double p_bound() const { return std::max(std::abs(p_min), std::abs(p_max)); }

    // All grid points, layout x = (q_0..q_{nq-1}, p_0..p_{np-1}).
    std::vector<std::vector<double>> grid() const;
};

struct VectorFieldExpr {
    int nq = 0, np = 0;
    std::vector<TrigPoly> components; // size nq + np

    static VectorFieldExpr zero(int nq, int np);
    int dim() const { return nq + np; }
    bool operator==(const VectorFieldExpr& o) const {
        return nq == o.nq && np == o.np && components == o.components;
    }
};

struct CompiledVectorField {
    std::vector<CompiledPoly> components;

    CompiledVectorField() = default;
    explicit CompiledVectorField(const VectorFieldExpr& x);
    void eval(const double* x, double* out) const;
};

class TrigForm {
public:
    TrigForm() = default;
    TrigForm(int degree, int nq, int np);

    static TrigForm function(const TrigPoly& f); // degree 0
    // Convenience: c * trig(k.q) * p^a dx_{basis...}
    static TrigForm term(int nq, int np, std::vector<int> basis, const TrigPoly& coeff);

    int degree() const { return degree_; }
    int nq() const { return nq_; }
    int np() const { return np_; }
    bool is_zero() const { return terms_.empty(); }
    const std::map<std::vector<int>, TrigPoly>& terms() const { return terms_; }
    TrigPoly coefficient(const std::vector<int>& basis) const;

    void add_term(std::vector<int> basis, const TrigPoly& coeff);

    TrigForm operator+(const TrigForm& o) const;
    TrigForm operator-(const TrigForm& o) const;
    TrigForm operator-() const;
    TrigForm scaled(const Rat& c) const;
    TrigForm scaled_poly(const TrigPoly& f) const; // f * this
    bool operator==(const TrigForm& o) const;

    TrigForm wedge(const TrigForm& o) const;
    TrigForm d() const;
    TrigForm interior(const VectorFieldExpr& x) const; // x -| this
    TrigPoly pair_field(const VectorFieldExpr& x) const; // degree-1 pairing

    TrigForm extended(int new_nq, int new_np) const;

    // Pointwise data. Degree 1: covector; degree 2: antisymmetric matrix.
    void eval_covector(const double* x, double* out) const;
    void eval_matrix(const double* x, double* out_rowmajor) const;

private:
    int degree_ = 0, nq_ = 0, np_ = 0;
    std::map<std::vector<int>, TrigPoly> terms_;

    int dim_check() const;
};

// d_eta beta = d beta - eta ^ beta. Throws NotClosed unless d eta = 0 exactly.
TrigForm d_eta(const TrigForm& beta, const TrigForm& eta);

// Largest |coefficient| of the form over the model grid.
double max_abs_on_grid(const TrigForm& form, const SpaceModel& space);

// Compiled degree-2 form as a matrix-valued function.
struct CompiledForm2 {
    int dim = 0;
    struct Entry {
        int a, b;
        CompiledPoly coeff;
    };
    std::vector<Entry> entries;

    CompiledForm2() = default;
    explicit CompiledForm2(const TrigForm& omega);
    void eval(const double* x, double* out_rowmajor) const; // dim x dim
};

struct CompiledForm1 {
    int dim = 0;
    std::vector<CompiledPoly> components;

    CompiledForm1() = default;
    explicit CompiledForm1(const TrigForm& alpha);
    void eval(const double* x, double* out) const;
};

} // namespace lcs
