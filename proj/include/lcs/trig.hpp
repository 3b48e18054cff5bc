#pragma once

// Exact function algebra on T^n x R^m: finite sums of
//   c * cos(k.q) * p^a   and   c * sin(k.q) * p^a
// with rational c, integer frequency vectors k and exponent vectors a.
// Closed under +, *, d/dq_i, d/dp_j; this is the coefficient class for all
// symbolic forms in the library.

#include <map>
#include <string>
#include <vector>

#include "lcs/rational.hpp"

namespace lcs {

struct TrigKey {
    std::vector<int> freq;
    bool sine = false;
    std::vector<int> ppow;

    bool operator<(const TrigKey& o) const {
        if (freq != o.freq) return freq < o.freq;
        if (sine != o.sine) return sine < o.sine;
        return ppow < o.ppow;
    }
    bool operator==(const TrigKey& o) const = default;
};

class TrigPoly {
public:
    TrigPoly() = default;
    TrigPoly(int nq, int np) : nq_(nq), np_(np) {}

    static TrigPoly constant(int nq, int np, const Rat& c);
    // c * trig(k.q) * p^a, canonicalized (leading nonzero frequency > 0).
    static TrigPoly harmonic(int nq, int np, const std::vector<int>& freq,
                             bool sine, const Rat& c,
                             const std::vector<int>& ppow = {});
    static TrigPoly coordinate_p(int nq, int np, int j); // the function p_j

    int nq() const { return nq_; }
    int np() const { return np_; }
    bool is_zero() const { return terms_.empty(); }
    bool is_constant() const;
    Rat constant_value() const; // 0 if no constant term
    // Mean over the torus at p = 0 powers: coefficient of the (0, cos, 0) key.
    Rat torus_mean() const { return constant_value(); }
    const std::map<TrigKey, Rat>& terms() const { return terms_; }

    TrigPoly operator+(const TrigPoly& o) const;
    TrigPoly operator-(const TrigPoly& o) const;
    TrigPoly operator-() const;
    TrigPoly operator*(const TrigPoly& o) const;
    TrigPoly scaled(const Rat& c) const;

    bool operator==(const TrigPoly& o) const {
        return nq_ == o.nq_ && np_ == o.np_ && terms_ == o.terms_;
    }

    TrigPoly derivative_q(int i) const;
    TrigPoly derivative_p(int j) const;

    // Same function on a larger model (extra q or p variables appended).
    TrigPoly extended(int new_nq, int new_np) const;

    double eval(const double* q, const double* p) const;

    // Rigorous sup bound on |this| over the torus x {|p_j| <= p_bound}.
    double sup_bound(double p_bound) const;

    std::string to_string() const;

private:
    int nq_ = 0, np_ = 0;
    std::map<TrigKey, Rat> terms_;

    void add_term(std::vector<int> freq, bool sine, Rat c, std::vector<int> ppow);
    void check_dims(const TrigPoly& o, const char* where) const;
};

// Flat, allocation-free evaluator for hot loops.
struct CompiledPoly {
    struct Term {
        double c;
        std::vector<int> freq;
        std::vector<int> ppow;
        bool sine;
    };
    int nq = 0, np = 0;
    std::vector<Term> terms;

    CompiledPoly() = default;
    explicit CompiledPoly(const TrigPoly& p);

    double eval(const double* q, const double* p) const;
};

// Truncated exponential exp(f) ~ sum_{j<=N} f^j / j! with N chosen so the
// certified remainder bound on |p| <= p_bound is below `target`. Returns the
// truncation and its remainder bound.
struct TruncatedExp {
    TrigPoly series;
    double remainder_bound = 0;
    int order = 0;
};
TruncatedExp exp_truncated(const TrigPoly& f, double target = 1e-12,
                           double p_bound = 4.0);

} // namespace lcs
