#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace nlcross {

enum class ErrorCode {
    DegenerateGamma,
    ZeroTime,
    SeedTooClose,
    StepSizeUnderflow,
    WindowTooShort,
    PoleAtB,
    NoConvergence,
    BranchCutHit,
    IndeterminatePoleRatio,
    NearSingularRecursion,
    SeriesDiverging,
    OutOfRangeProbability,
    IllConditionedFit,
    IllConditionedMatch,
    QuadratureFailure,
    MOutOfRange,
    NoSignChange,
    ConfigError,
};

// Stable names; these appear in the JSON error stream and in sweep rows.
std::string_view error_code_name(ErrorCode code) noexcept;

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what) : std::runtime_error(what), code_(code) {}
    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

}  // namespace nlcross
