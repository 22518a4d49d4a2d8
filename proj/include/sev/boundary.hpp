#pragma once

#include <cmath>

#include "sev/errors.hpp"
#include "sev/params.hpp"
#include "sev/state.hpp"

namespace sev {

/// Partition of the target circle |s| = rho by the termination condition.
enum class BoundaryClass { UP, BUP, NUP };

inline const char* boundary_name(BoundaryClass b) {
    switch (b) {
        case BoundaryClass::UP: return "UP";
        case BoundaryClass::BUP: return "BUP";
        case BoundaryClass::NUP: return "NUP";
    }
    return "?";
}

/// Classify a boundary state: usable part y < -rho v_r, nonusable y above,
/// neutral threshold (BUP) at equality within 1e-12 * rho.
inline BoundaryClass boundary_class(const GameParams& gp, const RelState& s) {
    gp.validate();
    if (std::abs(s.norm() - gp.rho) > 1e-9 * gp.rho)
        raise(ErrorCode::NotOnBoundary, "state is not on |s| = rho");
    double threshold = -gp.rho * gp.speed_ratio();
    double tol = 1e-12 * gp.rho;
    if (std::abs(s.y - threshold) <= tol) return BoundaryClass::BUP;
    return (s.y < threshold) ? BoundaryClass::UP : BoundaryClass::NUP;
}

/// Usable-part test for a boundary angle (x = rho sin, y = rho cos).
inline bool angle_in_usable_part(const GameParams& gp, double theta) {
    return gp.rho * std::cos(theta) < -gp.rho * gp.speed_ratio() - 1e-12 * gp.rho;
}

/// Half-opening of the usable part: UP angles satisfy |theta| > theta_up.
inline double usable_part_angle(const GameParams& gp) {
    return std::acos(-gp.speed_ratio());
}

}  // namespace sev
