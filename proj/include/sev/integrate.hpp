#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <string>
#include <vector>

#include "sev/dynamics.hpp"
#include "sev/errors.hpp"
#include "sev/params.hpp"
#include "sev/schedule.hpp"
#include "sev/state.hpp"

namespace sev {

struct TrajectorySample {
    double t = 0.0;  // marching clock (forward time t or backward time tau)
    RelState state;
    Controls controls;
};

struct TimedTrajectory {
    TimeDirection direction = TimeDirection::Forward;
    std::vector<TrajectorySample> samples;

    bool empty() const { return samples.empty(); }
    const TrajectorySample& back() const { return samples.back(); }
    double span() const { return samples.empty() ? 0.0 : samples.back().t - samples.front().t; }
};

/// Zero-crossing event. `direction` +1 fires on - -> +, -1 on + -> -, 0 on any.
struct EventSpec {
    std::function<double(double, const RelState&)> fn;
    int direction = 0;
    bool terminal = true;
    std::string name;
};

inline EventSpec radius_exit_event(const GameParams& gp, bool terminal = true) {
    return {[gp](double, const RelState& s) { return s.norm() - gp.rho; }, +1, terminal,
            "radius_exit"};
}

inline EventSpec x_crossing_event(bool terminal = true) {
    return {[](double, const RelState& s) { return s.x; }, 0, terminal, "x_crossing"};
}

struct EventHit {
    std::string name;
    double t = 0.0;
    RelState state;
};

struct IntegrationResult {
    TimedTrajectory trajectory;
    std::vector<EventHit> events;
    bool terminated_by_event = false;
};

namespace detail {

inline RelState rk4_step(const GameParams& gp, const RelState& s, double t, double h,
                         const PiecewiseControls& controls, double dir) {
    auto f = [&](double tt, const RelState& ss) {
        RelState r = relative_dynamics(gp, ss, controls(tt));
        return RelState{dir * r.x, dir * r.y};
    };
    // The last stage stays on the left limit so a step ending exactly at a
    // schedule breakpoint integrates the old piece throughout.
    double t_end = t + h * (1.0 - 1e-9);
    RelState k1 = f(t, s);
    RelState k2 = f(t + 0.5 * h, s + 0.5 * h * k1);
    RelState k3 = f(t + 0.5 * h, s + 0.5 * h * k2);
    RelState k4 = f(t_end, s + h * k3);
    return s + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

}  // namespace detail

/**
 * Fixed-step RK4 over [0, span] with event localization.
 *
 * The marching clock is forward time for Forward direction and backward time
 * tau otherwise (the vector field is negated). Events are detected by sign
 * change across a step and localized by bisection to time tolerance 1e-10;
 * the trajectory is truncated at the first triggered terminal event.
 */
inline IntegrationResult integrate(const GameParams& gp, const RelState& s0,
                                   const PiecewiseControls& controls, TimeDirection direction,
                                   double span, double dt,
                                   const std::vector<EventSpec>& events = {}) {
    gp.validate();
    if (!(dt > 0.0)) raise(ErrorCode::Validation, "dt must be > 0");
    if (!(span >= 0.0)) raise(ErrorCode::Validation, "span must be >= 0");
    if (controls.empty()) raise(ErrorCode::Validation, "empty control schedule");

    const double dir = (direction == TimeDirection::Forward) ? 1.0 : -1.0;
    const double time_tol = 1e-10;

    IntegrationResult out;
    out.trajectory.direction = direction;
    out.trajectory.samples.push_back({0.0, s0, controls(0.0)});

    std::vector<double> ev_prev(events.size());
    for (std::size_t i = 0; i < events.size(); ++i) ev_prev[i] = events[i].fn(0.0, s0);

    // Steps never straddle a schedule breakpoint; each piece is integrated as
    // a smooth arc so the classical order survives control switches.
    std::vector<double> breaks = controls.breakpoints();
    std::size_t next_break = 0;

    double t = 0.0;
    RelState s = s0;
    while (t < span - 0.5 * time_tol) {
        double h = std::min(dt, span - t);
        while (next_break < breaks.size() && breaks[next_break] <= t + time_tol) ++next_break;
        if (next_break < breaks.size() && breaks[next_break] < t + h - time_tol)
            h = breaks[next_break] - t;
        RelState s_next = detail::rk4_step(gp, s, t, h, controls, dir);
        if (!s_next.finite()) raise(ErrorCode::NonfiniteState, "state became non-finite");
        double t_next = t + h;

        // Event scan across the step; bisect every crossing, then order by hit time.
        struct Hit {
            std::size_t idx;
            double sub;  // sub-step length at the hit
            RelState state;
        };
        std::vector<Hit> hits;
        for (std::size_t i = 0; i < events.size(); ++i) {
            double v0 = ev_prev[i];
            double v1 = events[i].fn(t_next, s_next);
            ev_prev[i] = v1;
            bool crossed = (v0 < 0.0 && v1 >= 0.0 && events[i].direction >= 0) ||
                           (v0 > 0.0 && v1 <= 0.0 && events[i].direction <= 0);
            if (!crossed) continue;
            double lo = 0.0, hi = h;
            RelState s_hit = s_next;
            int iter = 0;
            while (hi - lo > time_tol && iter++ < 80) {
                double mid = 0.5 * (lo + hi);
                RelState sm = detail::rk4_step(gp, s, t, mid, controls, dir);
                double vm = events[i].fn(t + mid, sm);
                bool crossed_at_mid = (v0 < 0.0 && vm >= 0.0) || (v0 > 0.0 && vm <= 0.0);
                if (crossed_at_mid) {
                    hi = mid;
                    s_hit = sm;
                } else {
                    lo = mid;
                }
            }
            if (iter >= 80) raise(ErrorCode::StepTooLarge, "event bisection failed to converge");
            hits.push_back({i, hi, s_hit});
        }
        if (!hits.empty()) {
            std::sort(hits.begin(), hits.end(),
                      [](const Hit& a, const Hit& b) { return a.sub < b.sub; });
            for (const Hit& hit : hits) {
                double t_hit = t + hit.sub;
                out.events.push_back({events[hit.idx].name, t_hit, hit.state});
                if (events[hit.idx].terminal) {
                    out.trajectory.samples.push_back({t_hit, hit.state, controls(t_hit)});
                    out.terminated_by_event = true;
                    return out;
                }
            }
        }

        t = t_next;
        s = s_next;
        out.trajectory.samples.push_back({t, s, controls(t)});
    }
    return out;
}

}  // namespace sev
