#pragma once

#include <cmath>
#include <optional>

#include "sev/dynamics.hpp"
#include "sev/errors.hpp"
#include "sev/params.hpp"
#include "sev/state.hpp"

namespace sev {

enum class KindTag { EvaderEscapes, PursuerContains };

struct KindOutcome {
    KindTag tag = KindTag::EvaderEscapes;
    std::optional<double> bound;  // worst-case escape time, present iff escapes
};

/// Game of kind: decided by the speed ordering alone.
inline KindOutcome classify(const GameParams& gp) {
    gp.validate();
    if (gp.evader_faster()) return {KindTag::EvaderEscapes, gp.straight_bound()};
    return {KindTag::PursuerContains, std::nullopt};
}

/// Latched bearing used by the containment feedback law.
struct ContainmentMemory {
    double theta_bar = 0.0;
};

inline constexpr double kLatchBand = 1e-6;  // relative band below rho that re-latches

/**
 * Containment feedback for a pursuer at least as fast as the evader:
 * u_p = pi + theta_bar, with theta_bar re-latched to the current bearing
 * whenever the range reaches (1 - kLatchBand) * rho. At latch instants the
 * radial rate satisfies f.s <= rho (v_e - v_p) <= 0 regardless of u_e.
 */
inline double containment_feedback(const GameParams& gp, const RelState& s,
                                   ContainmentMemory& mem) {
    gp.validate();
    if (gp.evader_faster()) raise(ErrorCode::WrongRegime, "containment requires v_p >= v_e");
    // Tolerate the certified excursion band above rho.
    if (s.norm() > gp.rho * (1.0 + 1e-3))
        raise(ErrorCode::Validation, "containment feedback expects |s| <= rho");
    if (s.norm() >= (1.0 - kLatchBand) * gp.rho) mem.theta_bar = bearing(s);
    return std::numbers::pi + mem.theta_bar;
}

/// Escape time of the straight-line strategy (u_e = 0) against the worst
/// pursuer response (u_p = 0): the state slides down at speed v_e - v_p.
inline double straight_line_escape_time(const GameParams& gp, const RelState& s0) {
    gp.validate();
    gp.require_evader_faster();
    if (s0.norm() > gp.rho * (1.0 + 1e-9))
        raise(ErrorCode::Validation, "start must satisfy |s0| <= rho");
    double x = std::min(std::abs(s0.x), gp.rho);
    double reach = std::sqrt(std::max(0.0, gp.rho * gp.rho - x * x));
    double t = (s0.y + reach) / gp.closing_speed();
    return std::max(0.0, t);
}

}  // namespace sev
