#include "schlesinger/error.hpp"

namespace schlesinger {

std::string_view to_string(ErrorCode code) noexcept {
    switch (code) {
    case ErrorCode::SingularMatrix: return "SingularMatrix";
    case ErrorCode::SpectraCollide: return "SpectraCollide";
    case ErrorCode::NoSeparatingContour: return "NoSeparatingContour";
    case ErrorCode::TooLarge: return "TooLarge";
    case ErrorCode::NotRankOne: return "NotRankOne";
    case ErrorCode::ZeroVector: return "ZeroVector";
    case ErrorCode::RelationViolation: return "RelationViolation";
    case ErrorCode::NotAdmissible: return "NotAdmissible";
    case ErrorCode::AtPole: return "AtPole";
    case ErrorCode::AtZero: return "AtZero";
    case ErrorCode::AtSingularity: return "AtSingularity";
    case ErrorCode::NearSingularSet: return "NearSingularSet";
    case ErrorCode::PathHitsSingularSet: return "PathHitsSingularSet";
    case ErrorCode::InvalidInput: return "InvalidInput";
    case ErrorCode::GiveUp: return "GiveUp";
    }
    return "Unknown";
}

}  // namespace schlesinger
