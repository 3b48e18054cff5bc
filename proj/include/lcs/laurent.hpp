#pragma once

// Exact arithmetic in F[t, t^-1] for F in {Q, F2}, and matrix rank over the
// fraction field F(t). Ranks over F(t) equal Novikov ranks for integral
// classes, which is the only rank computation the rest of the library needs.

#include <map>
#include <string>
#include <vector>

#include "lcs/rational.hpp"

namespace lcs {

class LaurentPoly {
public:
    LaurentPoly() = default;
    explicit LaurentPoly(Field f) : field_(f) {}

    static LaurentPoly constant(Field f, const Rat& c);
    static LaurentPoly monomial(Field f, long exp, const Rat& c);
    static LaurentPoly zero(Field f) { return LaurentPoly(f); }
    static LaurentPoly one(Field f) { return constant(f, 1); }

    Field field() const { return field_; }
    bool is_zero() const { return coeffs_.empty(); }
    const std::map<long, Rat>& coeffs() const { return coeffs_; }

    long min_exp() const; // requires nonzero
    long max_exp() const; // requires nonzero
    long spread() const { return is_zero() ? 0 : max_exp() - min_exp(); }
    std::size_t term_count() const { return coeffs_.size(); }

    Rat coeff(long exp) const;
    void set_coeff(long exp, const Rat& c);

    LaurentPoly operator+(const LaurentPoly& o) const;
    LaurentPoly operator-(const LaurentPoly& o) const;
    LaurentPoly operator-() const;
    LaurentPoly operator*(const LaurentPoly& o) const;
    LaurentPoly shifted(long k) const; // multiply by t^k
    LaurentPoly scaled(const Rat& c) const;

    bool operator==(const LaurentPoly& o) const {
        return field_ == o.field_ && coeffs_ == o.coeffs_;
    }
    bool operator!=(const LaurentPoly& o) const { return !(*this == o); }

    // Exact division in F[t, t^-1]; throws if the remainder is nonzero.
    static LaurentPoly divide_exact(const LaurentPoly& a, const LaurentPoly& b);

    // Evaluate at a rational point t != 0 (rationals only).
    Rat eval(const Rat& t) const;

    std::string to_string() const;

private:
    Field field_ = Field::Rationals;
    std::map<long, Rat> coeffs_; // exponent -> nonzero coefficient

    void normalize();
};

struct LaurentMatrix {
    int rows = 0;
    int cols = 0;
    Field field = Field::Rationals;
    std::vector<LaurentPoly> entries; // row-major, rows*cols

    LaurentMatrix() = default;
    LaurentMatrix(int r, int c, Field f);

    LaurentPoly& at(int i, int j);
    const LaurentPoly& at(int i, int j) const;

    LaurentMatrix transposed() const;
    bool is_zero() const;
    LaurentMatrix operator*(const LaurentMatrix& o) const;
};

// Exact rank over the fraction field F(t), by fraction-free Bareiss
// elimination with full pivoting on lowest-degree-spread entries.
int rank_over_fraction_field(const LaurentMatrix& m);

} // namespace lcs
