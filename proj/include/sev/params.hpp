#pragma once

#include <algorithm>
#include <cmath>

#include "sev/errors.hpp"

namespace sev {

/**
 * Physical constants of the surveillance-evasion game.
 *
 * The evader is a unicycle with constant speed v_e and bounded turn rate
 * omega_e; the pursuer moves with constant speed v_p and may point its
 * velocity anywhere instantaneously; rho is the surveillance radius.
 */
struct GameParams {
    double v_e = 2.0;      // evader speed, > 0
    double v_p = 1.0;      // pursuer speed, >= 0
    double omega_e = 1.0;  // evader max turn rate, > 0
    double rho = 1.0;      // surveillance radius, > 0

    double speed_ratio() const { return v_p / v_e; }          // v_r
    double closing_speed() const { return v_e - v_p; }        // > 0 when evader faster
    bool evader_faster() const { return v_p < v_e; }

    /// Worst-case straight-line escape time 2*rho/(v_e - v_p).
    double straight_bound() const { return 2.0 * rho / closing_speed(); }

    /// Safety cap on backward arc length used when truncating characteristics.
    double tau_cap() const { return 2.0 * straight_bound(); }

    /// Default fixed integrator step.
    double default_dt() const { return 1e-3 * std::min(1.0 / omega_e, rho / v_e); }

    void validate() const {
        if (!(v_e > 0.0) || !std::isfinite(v_e)) raise(ErrorCode::Validation, "v_e must be > 0");
        if (!(v_p >= 0.0) || !std::isfinite(v_p)) raise(ErrorCode::Validation, "v_p must be >= 0");
        if (!(omega_e > 0.0) || !std::isfinite(omega_e)) raise(ErrorCode::Validation, "omega_e must be > 0");
        if (!(rho > 0.0) || !std::isfinite(rho)) raise(ErrorCode::Validation, "rho must be > 0");
    }

    void require_evader_faster(ErrorCode code = ErrorCode::WrongRegime) const {
        if (!evader_faster()) raise(code, "requires v_p < v_e");
    }
};

}  // namespace sev
