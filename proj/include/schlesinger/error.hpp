#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace schlesinger {

enum class ErrorCode {
    SingularMatrix,
    SpectraCollide,
    NoSeparatingContour,
    TooLarge,
    NotRankOne,
    ZeroVector,
    RelationViolation,
    NotAdmissible,
    AtPole,
    AtZero,
    AtSingularity,
    NearSingularSet,
    PathHitsSingularSet,
    InvalidInput,
    GiveUp,
};

std::string_view to_string(ErrorCode code) noexcept;

/// Every failure raised by the library carries one of the codes above so that
/// callers (the CLI in particular) can map it onto an exit status.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

    [[nodiscard]] ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

}  // namespace schlesinger
