#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace whidx {

enum class ErrorKind {
    DimensionMismatch,
    NonHermitian,
    SingularSystem,
    SingularResolvent,
    UnstablePair,
    ZeroOnOrOutsideDisc,
    NotUnimodular,
    PoleHit,
    UnstableArgument,
    NotAContraction,
    PreconditionViolated,
    NoUnitEigenvector,
    ZeroDenominator,
    NonMonotone,
    MalformedSequence,
    InconsistentIndexCount,
    NoStabilization,
    Parse,
};

std::string_view to_string(ErrorKind kind) noexcept;

// Every failure raised by the library carries a machine-checkable kind.
class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what)
        : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

}  // namespace whidx
