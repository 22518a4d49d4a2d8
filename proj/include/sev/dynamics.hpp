#pragma once

#include <cmath>

#include "sev/params.hpp"
#include "sev/state.hpp"

namespace sev {

/// Relative-frame dynamics of the game state:
///   xdot = -omega_e * y * u_e + v_p * sin(u_p)
///   ydot =  omega_e * x * u_e - v_e + v_p * cos(u_p)
inline RelState relative_dynamics(const GameParams& gp, const RelState& s, const Controls& c) {
    return {-gp.omega_e * s.y * c.u_e + gp.v_p * std::sin(c.u_p),
            gp.omega_e * s.x * c.u_e - gp.v_e + gp.v_p * std::cos(c.u_p)};
}

/// Radial pairing f(s,c).s; positive means outward motion (range increasing).
inline double radial_rate(const GameParams& gp, const RelState& s, const Controls& c) {
    return dot(relative_dynamics(gp, s, c), s);
}

/// Hamiltonian p.f + 1 (unit running cost, zero terminal cost).
inline double hamiltonian(const GameParams& gp, const RelState& s, const AdjointState& p,
                          const Controls& c) {
    RelState f = relative_dynamics(gp, s, c);
    return p.px * f.x + p.py * f.y + 1.0;
}

enum class TimeDirection { Forward, Backward };

/// Costate rate. Forward time: pdot = omega_e u_e (-py, px); backward: negated.
inline AdjointState adjoint_rate(const GameParams& gp, const AdjointState& p, double ue_sign,
                                 TimeDirection dir) {
    double w = gp.omega_e * ue_sign;
    AdjointState r{-w * p.py, w * p.px};
    if (dir == TimeDirection::Backward) return {-r.px, -r.py};
    return r;
}

/// Switching function sigma = px*y - py*x; the evader's bang control obeys
/// u_e in sign(sigma) on regular arcs.
inline double switch_sigma(const RelState& s, const AdjointState& p) {
    return p.px * s.y - p.py * s.x;
}

}  // namespace sev
