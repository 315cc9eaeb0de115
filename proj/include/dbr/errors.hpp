#ifndef DBR_ERRORS_HPP
#define DBR_ERRORS_HPP

#include <stdexcept>
#include <string>
#include <string_view>

namespace dbr {

enum class ErrorKind {
    InvalidDegree,
    PoleAtExpansionPoint,
    DeflationResidual,
    ZeroPolynomial,
    PoleInClosedDisc,
    DegenerateFactorization,
    RootPairingFailure,
    NotStrict,
    InvalidSpectrum,
    InvalidSpec,
    DegenerateDualBasis,
    IllConditionedGrammian,
    OutOfDomain,
    NotPositiveDefect,
    OutOfBall,
    NotInvariant,
    DecompositionFailure,
    NotDetected,
};

inline constexpr std::string_view to_string(ErrorKind kind) noexcept {
    switch (kind) {
        case ErrorKind::InvalidDegree: return "InvalidDegree";
        case ErrorKind::PoleAtExpansionPoint: return "PoleAtExpansionPoint";
        case ErrorKind::DeflationResidual: return "DeflationResidual";
        case ErrorKind::ZeroPolynomial: return "ZeroPolynomial";
        case ErrorKind::PoleInClosedDisc: return "PoleInClosedDisc";
        case ErrorKind::DegenerateFactorization: return "DegenerateFactorization";
        case ErrorKind::RootPairingFailure: return "RootPairingFailure";
        case ErrorKind::NotStrict: return "NotStrict";
        case ErrorKind::InvalidSpectrum: return "InvalidSpectrum";
        case ErrorKind::InvalidSpec: return "InvalidSpec";
        case ErrorKind::DegenerateDualBasis: return "DegenerateDualBasis";
        case ErrorKind::IllConditionedGrammian: return "IllConditionedGrammian";
        case ErrorKind::OutOfDomain: return "OutOfDomain";
        case ErrorKind::NotPositiveDefect: return "NotPositiveDefect";
        case ErrorKind::OutOfBall: return "OutOfBall";
        case ErrorKind::NotInvariant: return "NotInvariant";
        case ErrorKind::DecompositionFailure: return "DecompositionFailure";
        case ErrorKind::NotDetected: return "NotDetected";
    }
    return "Unknown";
}

/// Every failure raised by the library carries a machine-readable kind.
class Error : public std::runtime_error {
   public:
    Error(ErrorKind kind, const std::string& what)
        : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

   private:
    ErrorKind kind_;
};

}  // namespace dbr

#endif  // DBR_ERRORS_HPP
