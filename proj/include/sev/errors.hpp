#pragma once

#include <stdexcept>
#include <string>

namespace sev {

enum class ErrorCode {
    Validation,       // bad parameters or preconditions at the API boundary
    WrongRegime,      // operation requires the other speed ordering
    DegenerateGame,   // game of degree requested with v_p >= v_e
    NotOnBoundary,
    NotUsable,
    NegativeTau,
    OutOfRange,
    OriginState,
    EmptyTrajectory,
    StepTooLarge,
    NonfiniteState,
    NoConvergence,
    NoCharacteristic,
    ReplayDiverged,
    HorizonExceeded,
};

inline const char* error_name(ErrorCode c) {
    switch (c) {
        case ErrorCode::Validation: return "Validation";
        case ErrorCode::WrongRegime: return "WrongRegime";
        case ErrorCode::DegenerateGame: return "DegenerateGame";
        case ErrorCode::NotOnBoundary: return "NotOnBoundary";
        case ErrorCode::NotUsable: return "NotUsable";
        case ErrorCode::NegativeTau: return "NegativeTau";
        case ErrorCode::OutOfRange: return "OutOfRange";
        case ErrorCode::OriginState: return "OriginState";
        case ErrorCode::EmptyTrajectory: return "EmptyTrajectory";
        case ErrorCode::StepTooLarge: return "StepTooLarge";
        case ErrorCode::NonfiniteState: return "NonfiniteState";
        case ErrorCode::NoConvergence: return "NoConvergence";
        case ErrorCode::NoCharacteristic: return "NoCharacteristic";
        case ErrorCode::ReplayDiverged: return "ReplayDiverged";
        case ErrorCode::HorizonExceeded: return "HorizonExceeded";
    }
    return "Unknown";
}

/// Exception type used across the library; carries a machine-readable code.
class GameError : public std::runtime_error {
  public:
    GameError(ErrorCode code, const std::string& what)
        : std::runtime_error(std::string(error_name(code)) + ": " + what), code_(code) {}
    ErrorCode code() const noexcept { return code_; }

  private:
    ErrorCode code_;
};

[[noreturn]] inline void raise(ErrorCode code, const std::string& what) {
    throw GameError(code, what);
}

}  // namespace sev
