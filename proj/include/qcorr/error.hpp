#pragma once

#include <stdexcept>
#include <string>

namespace qcorr {

enum class ErrorKind {
    DimensionMismatch,
    NotHermitian,
    NegativeEigenvalue,
    TraceNotOne,
    NonUnitVector,
    RankOutOfRange,
    NotADistribution,
    NegativeInformation,
    InternalConsistency,
    NotPure,
    Malformed,
};

inline const char* to_string(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::DimensionMismatch: return "dimension-mismatch";
        case ErrorKind::NotHermitian: return "not-hermitian";
        case ErrorKind::NegativeEigenvalue: return "negative-eigenvalue";
        case ErrorKind::TraceNotOne: return "trace-not-one";
        case ErrorKind::NonUnitVector: return "non-unit-vector";
        case ErrorKind::RankOutOfRange: return "rank-out-of-range";
        case ErrorKind::NotADistribution: return "not-a-distribution";
        case ErrorKind::NegativeInformation: return "negative-information";
        case ErrorKind::InternalConsistency: return "internal-consistency";
        case ErrorKind::NotPure: return "not-pure";
        case ErrorKind::Malformed: return "malformed-input";
    }
    return "unknown";
}

/// Every failure raised by the library carries a kind so callers (the CLI in
/// particular) can map it onto a stable exit code.
class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what)
        : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

}  // namespace qcorr
