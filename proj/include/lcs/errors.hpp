#pragma once

#include <stdexcept>
#include <string>

namespace lcs {

// Typed failure categories. The CLI maps every lcs::Error to exit code 2
// with a machine-readable JSON body; anything else is an internal error.
enum class ErrorKind {
    FieldMismatch,
    BadComplex,
    BadCocycle,
    NotClosed,
    NotPrimitive,
    Degenerate,
    NondegeneracyLost,
    ContactConditionFailed,
    Precondition,
    PeriodMismatch,
    SeparationFailed,
    OutOfDomain,
    Parse,
    Io,
};

inline const char* error_kind_name(ErrorKind k) {
    switch (k) {
        case ErrorKind::FieldMismatch: return "field_mismatch";
        case ErrorKind::BadComplex: return "bad_complex";
        case ErrorKind::BadCocycle: return "bad_cocycle";
        case ErrorKind::NotClosed: return "not_closed";
        case ErrorKind::NotPrimitive: return "not_primitive";
        case ErrorKind::Degenerate: return "degenerate";
        case ErrorKind::NondegeneracyLost: return "nondegeneracy_lost";
        case ErrorKind::ContactConditionFailed: return "contact_condition_failed";
        case ErrorKind::Precondition: return "precondition";
        case ErrorKind::PeriodMismatch: return "period_mismatch";
        case ErrorKind::SeparationFailed: return "separation_failed";
        case ErrorKind::OutOfDomain: return "out_of_domain";
        case ErrorKind::Parse: return "parse";
        case ErrorKind::Io: return "io";
    }
    return "unknown";
}

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& msg)
        : std::runtime_error(msg), kind_(kind) {}

    ErrorKind kind() const { return kind_; }

private:
    ErrorKind kind_;
};

} // namespace lcs
