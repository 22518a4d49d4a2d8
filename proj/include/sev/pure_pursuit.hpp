#pragma once

#include <cmath>
#include <numbers>

#include "sev/dynamics.hpp"
#include "sev/errors.hpp"
#include "sev/feedback.hpp"
#include "sev/params.hpp"
#include "sev/state.hpp"

namespace sev {

/**
 * Escape time when the evader plays its equilibrium feedback while the
 * pursuer plays pure pursuit (heading straight at the evader, u_p = pi +
 * bearing). Integrated with RK4 on the closed loop; on the universal surface
 * the evader control chatters in theory, so the state is projected onto the
 * axis and ridden with u_e = 0 (Filippov sliding).
 */
inline double pure_pursuit_time(const GameParams& gp, const RelState& s0, double dt = -1.0) {
    gp.validate();
    gp.require_evader_faster(ErrorCode::DegenerateGame);
    if (s0.norm() > gp.rho * (1.0 + 1e-9)) raise(ErrorCode::Validation, "|s0| must be <= rho");
    if (dt <= 0.0) dt = gp.default_dt();

    const double cut = dispersal_height(gp);  // straight-play band on the +y axis
    const double x_pin = 1e-9 * gp.rho;
    const double horizon = 4.0 * gp.straight_bound();

    auto evader_u = [&](const RelState& s) -> double {
        if (s.x > 0.0) return -1.0;
        if (s.x < 0.0) return 1.0;
        if (s.y <= 0.0) return 0.0;
        return (gp.speed_ratio() > 0.5 && s.y <= cut) ? 0.0 : -1.0;  // dispersal tie-break
    };
    auto closed_loop = [&](const RelState& s) -> RelState {
        Controls c{evader_u(s), std::numbers::pi + bearing(s)};
        return relative_dynamics(gp, s, c);
    };

    RelState s = s0;
    double t = 0.0;
    if (s.norm() >= gp.rho * (1.0 - 1e-12)) {
        Controls c{evader_u(s), std::numbers::pi + bearing(s)};
        if (radial_rate(gp, s, c) > 0.0) return 0.0;
    }
    while (t < horizon) {
        // Sliding projection: once pinned to the axis with straight play
        // selected, the closed loop keeps x = 0 exactly.
        if (std::abs(s.x) < x_pin && evader_u({0.0, s.y}) == 0.0) s.x = 0.0;

        double r_now = s.norm();
        RelState k1 = closed_loop(s);
        RelState k2 = closed_loop(s + 0.5 * dt * k1);
        RelState k3 = closed_loop(s + 0.5 * dt * k2);
        RelState k4 = closed_loop(s + dt * k3);
        RelState s_next = s + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        if (!s_next.finite()) raise(ErrorCode::NonfiniteState, "pure-pursuit state non-finite");

        if (s_next.norm() >= gp.rho && r_now < gp.rho) {
            // Bisect the crossing; pure pursuit admits outward crossings only
            // on the usable part, so the hit is transversal.
            double lo = 0.0, hi = dt;
            RelState s_hit = s_next;
            for (int k = 0; k < 64 && hi - lo > 1e-10; ++k) {
                double mid = 0.5 * (lo + hi);
                RelState km1 = closed_loop(s);
                RelState km2 = closed_loop(s + 0.5 * mid * km1);
                RelState km3 = closed_loop(s + 0.5 * mid * km2);
                RelState km4 = closed_loop(s + mid * km3);
                RelState sm = s + (mid / 6.0) * (km1 + 2.0 * km2 + 2.0 * km3 + km4);
                if (sm.norm() >= gp.rho) {
                    hi = mid;
                    s_hit = sm;
                } else {
                    lo = mid;
                }
            }
            Controls c{evader_u(s_hit), std::numbers::pi + bearing(s_hit)};
            if (radial_rate(gp, s_hit, c) > 0.0) return t + hi;
            // Tangential graze: keep integrating.
        }
        s = s_next;
        t += dt;
    }
    raise(ErrorCode::HorizonExceeded, "pure-pursuit simulation did not escape in 4x bound");
}

}  // namespace sev
