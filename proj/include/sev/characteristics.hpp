#pragma once

#include <cmath>
#include <numbers>
#include <optional>

#include "sev/boundary.hpp"
#include "sev/dynamics.hpp"
#include "sev/errors.hpp"
#include "sev/gamma.hpp"
#include "sev/params.hpp"
#include "sev/state.hpp"

namespace sev {

enum class Region { A, B, C, Axis };

inline const char* region_name(Region r) {
    switch (r) {
        case Region::A: return "A";
        case Region::B: return "B";
        case Region::C: return "C";
        case Region::Axis: return "Axis";
    }
    return "?";
}

/// One point of a backward-synthesized arc: state, costate and the controls
/// in effect at that backward time.
struct CharPoint {
    RelState state;
    AdjointState adjoint;
    Controls controls;
};

/**
 * Region A: arcs emitted backward from a usable-part angle theta0 (excluding
 * the axis). ue_sign = -sign(sin theta0); the pursuer heading rotates at the
 * evader's turn rate. The costate direction matches the terminal-gradient
 * conditions on the usable part, so the Hamiltonian vanishes along the arc.
 */
inline CharPoint regionA_characteristic(const GameParams& gp, double theta0, double tau) {
    gp.validate();
    gp.require_evader_faster();
    if (tau < 0.0) raise(ErrorCode::NegativeTau, "tau must be >= 0");
    double s0 = std::sin(theta0);
    if (s0 == 0.0 || !angle_in_usable_part(gp, theta0))
        raise(ErrorCode::NotUsable, "theta0 is not strictly inside the usable part");
    const double sgn = (s0 > 0.0) ? 1.0 : -1.0;  // sign of the terminal x
    const double ue = -sgn;
    const double w = gp.omega_e;
    const double phi = theta0 - sgn * w * tau;

    RelState state{(sgn * gp.v_e / w) * (std::cos(w * tau) - 1.0) +
                       (gp.rho + tau * gp.v_p) * std::sin(phi),
                   (gp.v_e / w) * std::sin(w * tau) + (gp.rho + tau * gp.v_p) * std::cos(phi)};

    // Terminal costate from the usable-part transversality and H = 0;
    // the denominator v_p + v_e cos(theta0) is negative on the usable part.
    const double denom = gp.v_p + gp.v_e * std::cos(theta0);
    AdjointState adj{std::sin(phi) / denom, std::cos(phi) / denom};

    Controls ctrl{ue, std::numbers::pi + phi};
    return {state, adj, ctrl};
}

/**
 * Region B: arcs emitted backward from an axis anchor (0, y0) with y0 <= 0.
 * The costate starts at (0, 1/(v_e - v_p)) and rotates with the evader turn;
 * the pursuer heading is u_p = ue_sign * omega_e * tau.
 */
inline CharPoint regionB_characteristic(const GameParams& gp, double y0, int ue_sign,
                                        double tau) {
    gp.validate();
    gp.require_evader_faster();
    if (tau < 0.0) raise(ErrorCode::NegativeTau, "tau must be >= 0");
    if (ue_sign != -1 && ue_sign != 1) raise(ErrorCode::Validation, "ue_sign must be -1 or +1");
    const double w = gp.omega_e;
    const double u = static_cast<double>(ue_sign);
    const double sn = std::sin(w * tau), cs = std::cos(w * tau);

    RelState state{u * (y0 * sn + (gp.v_e / w) * (1.0 - cs) - tau * gp.v_p * sn),
                   y0 * cs + (gp.v_e / w) * sn - tau * gp.v_p * cs};
    AdjointState adj{std::sin(u * w * tau) / gp.closing_speed(),
                     std::cos(u * w * tau) / gp.closing_speed()};
    Controls ctrl{u, u * w * tau};
    return {state, adj, ctrl};
}

/// Anchor data of a region-C arc: the fictitious axis start y0 > 0, the
/// backward time tau_cross at which its x-component first returns to zero,
/// and the height y_cross of that crossing. The arc is valid for backward
/// times past tau_cross only.
struct RegionCAnchor {
    double y0 = 0.0;
    double tau_cross = 0.0;
    double y_cross = 0.0;
};

inline RegionCAnchor regionC_anchor(const GameParams& gp, double y0) {
    const double w = gp.omega_e;
    double y0t = (w / gp.v_e) * y0;
    double tt = crossing_time(gp, y0t);  // validates regime and range
    double tau_cross = tt / w;
    double y_cross = regionB_characteristic(gp, y0, -1, tau_cross).state.y;
    return {y0, tau_cross, y_cross};
}

/**
 * Region C: the tail of an axis-anchored arc past its first re-crossing of
 * the axis, reparametrized by sigma = tau - tau_cross so that sigma = 0 sits
 * at the crossing point (0, y_cross). Only these tails satisfy the evader
 * sign condition; the piece before the crossing is scaffolding.
 */
inline CharPoint regionC_characteristic(const GameParams& gp, double y0, int ue_sign,
                                        double sigma) {
    if (sigma < 0.0) raise(ErrorCode::NegativeTau, "sigma must be >= 0");
    if (ue_sign != -1 && ue_sign != 1) raise(ErrorCode::Validation, "ue_sign must be -1 or +1");
    RegionCAnchor anchor = regionC_anchor(gp, y0);
    CharPoint p = regionB_characteristic(gp, y0, -1, sigma + anchor.tau_cross);
    if (ue_sign == 1) {  // mirrored branch
        p.state = mirror(p.state);
        p.adjoint = mirror(p.adjoint);
        p.controls = mirror(p.controls);
    }
    return p;
}

/// One backward-synthesized optimal arc (bookkeeping for fans and solves).
struct Characteristic {
    Region region = Region::A;
    double terminal_param = 0.0;  // theta0 (region A) or y0 (regions B and C)
    int ue_sign = -1;
    double validity_begin = 0.0;  // region C: tau_cross, else 0
    double validity_end = 0.0;
};

namespace detail {

/// Evaluate an arc family point by region, using the raw backward time.
inline CharPoint char_point(const GameParams& gp, const Characteristic& ch, double tau) {
    switch (ch.region) {
        case Region::A: {
            // Mirror handled through the anchor angle sign.
            return regionA_characteristic(gp, ch.terminal_param, tau);
        }
        case Region::B:
            return regionB_characteristic(gp, ch.terminal_param, ch.ue_sign, tau);
        case Region::C:
            return regionC_characteristic(gp, ch.terminal_param, ch.ue_sign,
                                          tau - ch.validity_begin);
        case Region::Axis:
            break;
    }
    raise(ErrorCode::Validation, "char_point: axis arcs are handled analytically");
}

/**
 * First backward time at which an arc stops being a valid game-set
 * characteristic: the x sign condition breaks, the arc re-exits |s| = rho, or
 * the safety cap is reached. Located by a dense scan plus bisection.
 */
inline double validity_end(const GameParams& gp, const Characteristic& ch) {
    const double cap = ch.validity_begin + gp.tau_cap();
    const double w = gp.omega_e;
    // Sample about 40 points per turn-rate radian, at least 256 overall.
    int n = std::max(256, static_cast<int>(40.0 * w * (cap - ch.validity_begin)));
    auto bad = [&](double tau) {
        CharPoint p = char_point(gp, ch, tau);
        double xs = p.state.x * static_cast<double>(-ch.ue_sign);  // should stay >= 0
        return xs < -1e-12 * gp.rho || p.state.norm() > gp.rho * (1.0 + 1e-12);
    };
    double prev = ch.validity_begin;
    for (int i = 1; i <= n; ++i) {
        double tau = ch.validity_begin + (cap - ch.validity_begin) * i / n;
        if (bad(tau)) {
            double lo = prev, hi = tau;
            for (int k = 0; k < 60 && hi - lo > 1e-12; ++k) {
                double mid = 0.5 * (lo + hi);
                (bad(mid) ? hi : lo) = mid;
            }
            return lo;
        }
        prev = tau;
    }
    return cap;
}

}  // namespace detail

}  // namespace sev
