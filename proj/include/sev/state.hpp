#pragma once

#include <cmath>
#include <numbers>

namespace sev {

/// Relative position of the pursuer in the evader-fixed frame.
/// The +y axis is the evader's heading, +x is 90 degrees clockwise from it.
struct RelState {
    double x = 0.0;
    double y = 0.0;

    double norm() const { return std::hypot(x, y); }
    double norm2() const { return x * x + y * y; }

    RelState operator+(const RelState& o) const { return {x + o.x, y + o.y}; }
    RelState operator-(const RelState& o) const { return {x - o.x, y - o.y}; }
    RelState operator*(double s) const { return {x * s, y * s}; }

    bool finite() const { return std::isfinite(x) && std::isfinite(y); }
};

inline RelState operator*(double s, const RelState& v) { return v * s; }
inline double dot(const RelState& a, const RelState& b) { return a.x * b.x + a.y * b.y; }

/// Polar representation: x = r sin(theta), y = r cos(theta).
/// theta is the bearing measured from the evader's heading (+y axis).
struct PolarState {
    double r = 0.0;
    double theta = 0.0;  // in (-pi, pi]
};

/// Costate (gradient of the value function along a characteristic).
struct AdjointState {
    double px = 0.0;
    double py = 0.0;
};

/// Wrap an angle to the canonical interval (-pi, pi].
inline double wrap_angle(double a) {
    const double two_pi = 2.0 * std::numbers::pi;
    double w = std::remainder(a, two_pi);  // (-pi, pi] up to the pi edge
    if (w <= -std::numbers::pi) w += two_pi;
    return w;
}

/// Control pair: evader normalized turn rate and pursuer relative heading.
/// u_p is kept unwrapped internally; wrap_angle recovers the canonical value.
struct Controls {
    double u_e = 0.0;  // in [-1, 1]
    double u_p = 0.0;  // radians, unwrapped

    double u_p_wrapped() const { return wrap_angle(u_p); }
};

/// Bearing of a relative state; theta = 0 convention at r = 0.
inline double bearing(const RelState& s) {
    if (s.x == 0.0 && s.y == 0.0) return 0.0;
    return std::atan2(s.x, s.y);
}

inline PolarState to_polar(const RelState& s) { return {s.norm(), bearing(s)}; }

inline RelState from_polar(const PolarState& p) {
    return {p.r * std::sin(p.theta), p.r * std::cos(p.theta)};
}

/// Mirror across the y-axis (the game's symmetry: x -> -x, controls negate).
inline RelState mirror(const RelState& s) { return {-s.x, s.y}; }
inline Controls mirror(const Controls& c) { return {-c.u_e, -c.u_p}; }
inline AdjointState mirror(const AdjointState& p) { return {-p.px, p.py}; }

}  // namespace sev
