#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include "lcs/errors.hpp"

namespace lcs {

using Rat = boost::multiprecision::cpp_rational;
using BigInt = boost::multiprecision::cpp_int;

// Base field of a Laurent polynomial: rationals or the two-element field.
enum class Field { Rationals, GF2 };

inline const char* field_name(Field f) {
    return f == Field::Rationals ? "Q" : "F2";
}

inline void require_same_field(Field a, Field b, const char* where) {
    if (a != b)
        throw Error(ErrorKind::FieldMismatch,
                    std::string(where) + ": operands over different base fields");
}

// Canonical representative of a scalar in the given field. GF2 scalars are
// stored as 0/1 inside Rat; arithmetic over GF2 never introduces denominators.
inline Rat reduce_scalar(const Rat& c, Field f) {
    if (f == Field::Rationals) return c;
    if (boost::multiprecision::denominator(c) != 1)
        throw Error(ErrorKind::FieldMismatch, "GF2 scalar with nontrivial denominator");
    BigInt n = boost::multiprecision::numerator(c) % 2;
    if (n < 0) n += 2;
    return Rat(n);
}

inline Rat scalar_inverse(const Rat& c, Field f) {
    if (c == 0) throw Error(ErrorKind::Degenerate, "inverse of zero scalar");
    if (f == Field::GF2) return Rat(1);
    return Rat(1) / c;
}

inline double to_double(const Rat& c) {
    return c.convert_to<double>();
}

} // namespace lcs
