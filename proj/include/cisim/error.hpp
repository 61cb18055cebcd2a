#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace cisim {

/// Failure categories raised by the library. The CLI maps these onto exit codes.
enum class ErrorCode {
    InvalidArgument,
    DimensionMismatch,
    NotHermitian,
    NegativeSpectrum,
    ConvergenceFailure,
    TruncationLeak,
    PositivityViolation,
    TraceDrift,
    DegenerateGap,
    InsufficientSampling,
    AtSingularity,
    PathThroughOrigin,
    SegmentTooCoarse,
    InsufficientCoverage,
    ZeroDetuning,
    EmptyDistribution,
    GridMismatch,
    ConfigError,
    IoError,
};

std::string_view to_string(ErrorCode code);

class SimError : public std::runtime_error {
public:
    SimError(ErrorCode code, const std::string& what)
        : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) { throw SimError(code, what); }

inline void require(bool cond, ErrorCode code, const std::string& what) {
    if (!cond) fail(code, what);
}

}  // namespace cisim
