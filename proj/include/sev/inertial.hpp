#pragma once

#include <cmath>
#include <vector>

#include "sev/errors.hpp"
#include "sev/integrate.hpp"
#include "sev/params.hpp"
#include "sev/state.hpp"

namespace sev {

/// Full configuration in the inertial frame. The pursuer heading is not a
/// state: it is recovered from theta_e and the relative heading input u_p.
struct InertialState {
    double xe = 0.0, ye = 0.0;  // evader position
    double theta_e = 0.0;       // evader heading (0 along +y, clockwise positive toward +x)
    double xp = 0.0, yp = 0.0;  // pursuer position
};

/// Rotate the pursuer offset into the evader frame.
inline RelState to_relative(const InertialState& in) {
    double c = std::cos(in.theta_e), s = std::sin(in.theta_e);
    double dx = in.xp - in.xe, dy = in.yp - in.ye;
    return {c * dx - s * dy, s * dx + c * dy};
}

/// Inverse of to_relative for a known evader pose.
inline void place_pursuer(InertialState& in, const RelState& rel) {
    double c = std::cos(in.theta_e), s = std::sin(in.theta_e);
    in.xp = in.xe + c * rel.x + s * rel.y;
    in.yp = in.ye - s * rel.x + c * rel.y;
}

struct InertialSample {
    double t = 0.0;
    InertialState state;
};

struct InertialTrajectory {
    std::vector<InertialSample> samples;
};

/**
 * Replay a forward relative trajectory in the original coordinates.
 *
 * The evader kinematics are integrated with the controls attached to the
 * trajectory samples (piecewise-constant u_e per sample interval); the
 * pursuer heading is theta_p(t) = theta_e(t) + u_p(t). The evader start pose
 * fixes the rigid transform; the pursuer start is placed from the first
 * relative sample.
 */
inline InertialTrajectory to_inertial(const GameParams& gp, const TimedTrajectory& rel_traj,
                                      const InertialState& evader_start) {
    if (rel_traj.empty()) raise(ErrorCode::EmptyTrajectory, "relative trajectory has no samples");
    if (rel_traj.direction != TimeDirection::Forward)
        raise(ErrorCode::Validation, "to_inertial expects a forward trajectory");
    if (rel_traj.samples.size() < 2)
        raise(ErrorCode::EmptyTrajectory, "relative trajectory has zero length");

    InertialState cur = evader_start;
    place_pursuer(cur, rel_traj.samples.front().state);

    InertialTrajectory out;
    out.samples.push_back({rel_traj.samples.front().t, cur});

    // March the evader and pursuer ODEs over each sample interval with RK4.
    // Controls are interpolated in time: u_e held per interval, u_p linear.
    for (std::size_t k = 0; k + 1 < rel_traj.samples.size(); ++k) {
        const TrajectorySample& a = rel_traj.samples[k];
        const TrajectorySample& b = rel_traj.samples[k + 1];
        double h = b.t - a.t;
        if (!(h > 0.0)) raise(ErrorCode::Validation, "trajectory times must increase");
        double u_e = a.controls.u_e;
        double up_a = a.controls.u_p;
        double up_rate = (b.controls.u_p - a.controls.u_p) / h;

        auto rate = [&](double s, const InertialState& st) {
            double u_p = up_a + up_rate * s;
            double theta_p = st.theta_e + u_p;
            InertialState d;
            d.xe = gp.v_e * std::sin(st.theta_e);
            d.ye = gp.v_e * std::cos(st.theta_e);
            d.theta_e = gp.omega_e * u_e;
            d.xp = gp.v_p * std::sin(theta_p);
            d.yp = gp.v_p * std::cos(theta_p);
            return d;
        };
        auto add = [](const InertialState& st, const InertialState& d, double w) {
            InertialState r = st;
            r.xe += w * d.xe;
            r.ye += w * d.ye;
            r.theta_e += w * d.theta_e;
            r.xp += w * d.xp;
            r.yp += w * d.yp;
            return r;
        };
        InertialState k1 = rate(0.0, cur);
        InertialState k2 = rate(0.5 * h, add(cur, k1, 0.5 * h));
        InertialState k3 = rate(0.5 * h, add(cur, k2, 0.5 * h));
        InertialState k4 = rate(h, add(cur, k3, h));
        InertialState next = cur;
        next = add(next, k1, h / 6.0);
        next = add(next, k2, h / 3.0);
        next = add(next, k3, h / 3.0);
        next = add(next, k4, h / 6.0);
        cur = next;
        out.samples.push_back({b.t, cur});
    }
    return out;
}

}  // namespace sev
