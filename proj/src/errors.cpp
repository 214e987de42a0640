#include "nlcross/errors.hpp"

namespace nlcross {

std::string_view error_code_name(ErrorCode code) noexcept {
    switch (code) {
    case ErrorCode::DegenerateGamma: return "DegenerateGamma";
    case ErrorCode::ZeroTime: return "ZeroTime";
    case ErrorCode::SeedTooClose: return "SeedTooClose";
    case ErrorCode::StepSizeUnderflow: return "StepSizeUnderflow";
    case ErrorCode::WindowTooShort: return "WindowTooShort";
    case ErrorCode::PoleAtB: return "PoleAtB";
    case ErrorCode::NoConvergence: return "NoConvergence";
    case ErrorCode::BranchCutHit: return "BranchCutHit";
    case ErrorCode::IndeterminatePoleRatio: return "IndeterminatePoleRatio";
    case ErrorCode::NearSingularRecursion: return "NearSingularRecursion";
    case ErrorCode::SeriesDiverging: return "SeriesDiverging";
    case ErrorCode::OutOfRangeProbability: return "OutOfRangeProbability";
    case ErrorCode::IllConditionedFit: return "IllConditionedFit";
    case ErrorCode::IllConditionedMatch: return "IllConditionedMatch";
    case ErrorCode::QuadratureFailure: return "QuadratureFailure";
    case ErrorCode::MOutOfRange: return "MOutOfRange";
    case ErrorCode::NoSignChange: return "NoSignChange";
    case ErrorCode::ConfigError: return "ConfigError";
    }
    return "Unknown";
}

}  // namespace nlcross
