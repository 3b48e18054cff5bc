#include "lcs/laurent.hpp"

#include <algorithm>
#include <sstream>
#include <tuple>

namespace lcs {

LaurentPoly LaurentPoly::constant(Field f, const Rat& c) {
    return monomial(f, 0, c);
}

LaurentPoly LaurentPoly::monomial(Field f, long exp, const Rat& c) {
    LaurentPoly p(f);
    Rat r = reduce_scalar(c, f);
    if (r != 0) p.coeffs_[exp] = r;
    return p;
}

long LaurentPoly::min_exp() const {
    if (is_zero()) throw Error(ErrorKind::Precondition, "min_exp of zero polynomial");
    return coeffs_.begin()->first;
}

long LaurentPoly::max_exp() const {
    if (is_zero()) throw Error(ErrorKind::Precondition, "max_exp of zero polynomial");
    return coeffs_.rbegin()->first;
}

Rat LaurentPoly::coeff(long exp) const {
    auto it = coeffs_.find(exp);
    return it == coeffs_.end() ? Rat(0) : it->second;
}

void LaurentPoly::set_coeff(long exp, const Rat& c) {
    Rat r = reduce_scalar(c, field_);
    if (r == 0)
        coeffs_.erase(exp);
    else
        coeffs_[exp] = r;
}

void LaurentPoly::normalize() {
    for (auto it = coeffs_.begin(); it != coeffs_.end();) {
        it->second = reduce_scalar(it->second, field_);
        if (it->second == 0)
            it = coeffs_.erase(it);
        else
            ++it;
    }
}

LaurentPoly LaurentPoly::operator+(const LaurentPoly& o) const {
    require_same_field(field_, o.field_, "laurent add");
    LaurentPoly r = *this;
    for (const auto& [e, c] : o.coeffs_) r.coeffs_[e] += c;
    r.normalize();
    return r;
}

LaurentPoly LaurentPoly::operator-(const LaurentPoly& o) const {
    require_same_field(field_, o.field_, "laurent sub");
    LaurentPoly r = *this;
    for (const auto& [e, c] : o.coeffs_) r.coeffs_[e] -= c;
    r.normalize();
    return r;
}

LaurentPoly LaurentPoly::operator-() const {
    LaurentPoly r(field_);
    for (const auto& [e, c] : coeffs_) r.coeffs_[e] = reduce_scalar(-c, field_);
    r.normalize();
    return r;
}

LaurentPoly LaurentPoly::operator*(const LaurentPoly& o) const {
    require_same_field(field_, o.field_, "laurent_mul");
    LaurentPoly r(field_);
    for (const auto& [ea, ca] : coeffs_)
        for (const auto& [eb, cb] : o.coeffs_)
            r.coeffs_[ea + eb] += ca * cb;
    r.normalize();
    return r;
}

LaurentPoly LaurentPoly::shifted(long k) const {
    LaurentPoly r(field_);
    for (const auto& [e, c] : coeffs_) r.coeffs_[e + k] = c;
    return r;
}

LaurentPoly LaurentPoly::scaled(const Rat& c) const {
    LaurentPoly r(field_);
    for (const auto& [e, v] : coeffs_) r.coeffs_[e] = v * c;
    r.normalize();
    return r;
}

LaurentPoly LaurentPoly::divide_exact(const LaurentPoly& a, const LaurentPoly& b) {
    require_same_field(a.field_, b.field_, "laurent divide");
    if (b.is_zero()) throw Error(ErrorKind::Degenerate, "division by zero polynomial");
    if (a.is_zero()) return zero(a.field_);

    // Long division from the top exponent; Laurent shifts are units, so the
    // quotient may have negative exponents. An exact quotient has lowest
    // exponent a.min - b.min; falling below that proves inexactness.
    LaurentPoly rem = a;
    LaurentPoly quot(a.field_);
    const long b_top = b.max_exp();
    const Rat b_lead = b.coeff(b_top);
    const long q_floor = a.min_exp() - b.min_exp();
    while (!rem.is_zero()) {
        const long q_exp = rem.max_exp() - b_top;
        if (q_exp < q_floor) break;
        Rat q_c = rem.coeff(rem.max_exp()) * scalar_inverse(b_lead, a.field_);
        q_c = reduce_scalar(q_c, a.field_);
        quot.coeffs_[q_exp] = q_c;
        rem = rem - b.shifted(q_exp).scaled(q_c);
    }
    if (!rem.is_zero())
        throw Error(ErrorKind::Precondition, "inexact polynomial division");
    quot.normalize();
    return quot;
}

Rat LaurentPoly::eval(const Rat& t) const {
    if (field_ != Field::Rationals)
        throw Error(ErrorKind::FieldMismatch, "eval only over rationals");
    if (t == 0) throw Error(ErrorKind::Precondition, "eval at t = 0");
    Rat acc = 0;
    for (const auto& [e, c] : coeffs_) {
        Rat p = 1;
        long n = e >= 0 ? e : -e;
        Rat base = e >= 0 ? t : Rat(1) / t;
        for (long i = 0; i < n; ++i) p *= base;
        acc += c * p;
    }
    return acc;
}

std::string LaurentPoly::to_string() const {
    if (is_zero()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& [e, c] : coeffs_) {
        if (!first) os << (c > 0 ? " + " : " - ");
        else if (c < 0) os << "-";
        Rat a = c > 0 ? c : Rat(-c);
        if (a != 1 || e == 0) os << a.str();
        if (e != 0) {
            if (a != 1) os << "*";
            os << "t";
            if (e != 1) os << "^" << e;
        }
        first = false;
    }
    return os.str();
}

LaurentMatrix::LaurentMatrix(int r, int c, Field f)
    : rows(r), cols(c), field(f), entries(static_cast<std::size_t>(r) * c, LaurentPoly(f)) {}

LaurentPoly& LaurentMatrix::at(int i, int j) {
    return entries[static_cast<std::size_t>(i) * cols + j];
}

const LaurentPoly& LaurentMatrix::at(int i, int j) const {
    return entries[static_cast<std::size_t>(i) * cols + j];
}

LaurentMatrix LaurentMatrix::transposed() const {
    LaurentMatrix r(cols, rows, field);
    for (int i = 0; i < rows; ++i)
        for (int j = 0; j < cols; ++j) r.at(j, i) = at(i, j);
    return r;
}

bool LaurentMatrix::is_zero() const {
    for (const auto& e : entries)
        if (!e.is_zero()) return false;
    return true;
}

LaurentMatrix LaurentMatrix::operator*(const LaurentMatrix& o) const {
    require_same_field(field, o.field, "laurent matmul");
    if (cols != o.rows) throw Error(ErrorKind::Precondition, "matmul shape mismatch");
    LaurentMatrix r(rows, o.cols, field);
    for (int i = 0; i < rows; ++i)
        for (int k = 0; k < cols; ++k) {
            if (at(i, k).is_zero()) continue;
            for (int j = 0; j < o.cols; ++j)
                r.at(i, j) = r.at(i, j) + at(i, k) * o.at(k, j);
        }
    return r;
}

namespace {

// Pivot preference: smallest exponent spread, then smallest top exponent,
// then fewest terms; keeps Bareiss intermediates from drifting in degree.
std::tuple<long, long, std::size_t> pivot_score(const LaurentPoly& p) {
    return {p.spread(), p.max_exp(), p.term_count()};
}

void normalize_row(LaurentMatrix& m, int i, int from_col) {
    bool any = false;
    long mn = 0;
    for (int j = from_col; j < m.cols; ++j) {
        if (m.at(i, j).is_zero()) continue;
        long e = m.at(i, j).min_exp();
        mn = any ? std::min(mn, e) : e;
        any = true;
    }
    if (!any || mn == 0) return;
    for (int j = from_col; j < m.cols; ++j)
        if (!m.at(i, j).is_zero()) m.at(i, j) = m.at(i, j).shifted(-mn);
}

} // namespace

int rank_over_fraction_field(const LaurentMatrix& input) {
    LaurentMatrix m = input;
    const int n = std::min(m.rows, m.cols);
    for (int i = 0; i < m.rows; ++i) normalize_row(m, i, 0);

    LaurentPoly prev = LaurentPoly::one(m.field);
    int r = 0;
    for (; r < n; ++r) {
        int pi = -1, pj = -1;
        std::tuple<long, long, std::size_t> best{};
        for (int i = r; i < m.rows; ++i)
            for (int j = r; j < m.cols; ++j) {
                if (m.at(i, j).is_zero()) continue;
                auto s = pivot_score(m.at(i, j));
                if (pi < 0 || s < best) {
                    best = s;
                    pi = i;
                    pj = j;
                }
            }
        if (pi < 0) break; // remaining block is zero

        if (pi != r)
            for (int j = 0; j < m.cols; ++j) std::swap(m.at(pi, j), m.at(r, j));
        if (pj != r)
            for (int i = 0; i < m.rows; ++i) std::swap(m.at(i, pj), m.at(i, r));

        const LaurentPoly piv = m.at(r, r);
        for (int i = r + 1; i < m.rows; ++i) {
            for (int j = r + 1; j < m.cols; ++j) {
                LaurentPoly num = m.at(i, j) * piv - m.at(i, r) * m.at(r, j);
                m.at(i, j) = LaurentPoly::divide_exact(num, prev);
            }
            m.at(i, r) = LaurentPoly::zero(m.field);
            normalize_row(m, i, r + 1);
        }
        prev = piv;
    }
    return r;
}

} // namespace lcs
