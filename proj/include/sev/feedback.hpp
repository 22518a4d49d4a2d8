#pragma once

#include <cmath>
#include <optional>
#include <vector>

#include "sev/characteristics.hpp"
#include "sev/errors.hpp"
#include "sev/gamma.hpp"
#include "sev/params.hpp"
#include "sev/state.hpp"

namespace sev {

/// Axis height separating straight-line play from the dispersal fan on the
/// positive y-axis: the height at which the tangent axis-anchored arc grazes
/// the axis. Zero when v_r <= 1/2 (the whole positive axis disperses).
inline double dispersal_height(const GameParams& gp) {
    gp.validate();
    gp.require_evader_faster();
    auto cp = gamma_critical(gp);
    if (!cp) return 0.0;
    double y0 = (gp.v_e / gp.omega_e) * cp->y0_sharp;
    return regionB_characteristic(gp, y0, -1, cp->tau_sharp / gp.omega_e).state.y;
}

/**
 * Bearing-based evader feedback: the set of minimizing turn commands.
 *
 * y0_sharp is the axis height below which straight play is optimal on the
 * positive y-axis; it must be present exactly when v_r > 1/2 (pass 0 or
 * absent otherwise, where only the origin-adjacent axis point keeps u_e = 0).
 */
inline std::vector<double> evader_feedback(const GameParams& gp, const RelState& s,
                                           std::optional<double> y0_sharp) {
    gp.validate();
    gp.require_evader_faster();
    if (s.x == 0.0 && s.y == 0.0)
        raise(ErrorCode::OriginState, "bearing undefined at the origin; axis play applies");
    if (s.x > 0.0) return {-1.0};
    if (s.x < 0.0) return {+1.0};
    if (s.y < 0.0) return {0.0};  // theta = pi, universal surface
    // theta = 0: straight play below the dispersal cut, otherwise either turn.
    double cut = y0_sharp.value_or(0.0);
    if (gp.speed_ratio() > 0.5 && y0_sharp && s.y <= cut) return {0.0};
    return {-1.0, +1.0};
}

}  // namespace sev
