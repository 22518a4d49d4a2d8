#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>
#include <optional>
#include <sstream>
#include <vector>

#include "sev/boundary.hpp"
#include "sev/characteristics.hpp"
#include "sev/dynamics.hpp"
#include "sev/errors.hpp"
#include "sev/feedback.hpp"
#include "sev/gamma.hpp"
#include "sev/integrate.hpp"
#include "sev/params.hpp"
#include "sev/schedule.hpp"
#include "sev/state.hpp"

namespace sev {

struct Phase {
    Region region = Region::Axis;
    double duration = 0.0;
};

/// Nash-optimal open-loop solution from one initial state.
struct Solution {
    double T_star = 0.0;
    std::vector<Phase> phases;
    bool dispersal = false;
    RelState initial_state;
    RelState terminal_state;
    Region region = Region::Axis;  // tag of the covering family at s0

    // Closed-form reconstruction data.
    bool has_arc = false;
    Characteristic arc;         // set when has_arc
    double arc_span = 0.0;      // forward time spent on the arc
    double axis_start_y = 0.0;  // entry height of the trailing axis phase
    bool has_axis_phase = false;
    bool straight_line = false;  // straight_line_escape helper solutions
};

/// Closed-form state along a solution at forward time t in [0, T_star].
inline RelState solution_state(const GameParams& gp, const Solution& sol, double t) {
    t = std::clamp(t, 0.0, sol.T_star);
    if (sol.straight_line)
        return {sol.initial_state.x, sol.initial_state.y - t * gp.closing_speed()};
    if (sol.has_arc && t <= sol.arc_span) {
        double tau_at_s0 = sol.arc.validity_begin + sol.arc_span;
        return detail::char_point(gp, sol.arc, tau_at_s0 - t).state;
    }
    double t_axis = sol.has_arc ? t - sol.arc_span : t;
    return {0.0, sol.axis_start_y - t_axis * gp.closing_speed()};
}

/// Forward-time piecewise control schedule realizing a solution.
inline PiecewiseControls optimal_controls(const GameParams& gp, const Solution& sol) {
    PiecewiseControls sched;
    const double w = gp.omega_e;
    if (sol.straight_line) {
        sched.add_piece(0.0, 0.0, 0.0);
        return sched;
    }
    if (sol.has_arc) {
        const Characteristic& ch = sol.arc;
        double ue = static_cast<double>(ch.ue_sign);
        double tau_at_s0 = ch.validity_begin + sol.arc_span;
        switch (ch.region) {
            case Region::A: {
                // Backward law u_p(tau) = pi + theta0 + ue * omega * tau.
                double up0 = std::numbers::pi + ch.terminal_param + ue * w * tau_at_s0;
                sched.add_piece(0.0, ue, up0, -ue * w);
                break;
            }
            case Region::B:
            case Region::C: {
                // Backward law u_p(tau) = ue * omega * tau (tau from the axis anchor).
                sched.add_piece(0.0, ue, ue * w * tau_at_s0, -ue * w);
                break;
            }
            case Region::Axis:
                break;
        }
    }
    if (sol.has_axis_phase || !sol.has_arc)
        sched.add_piece(sol.has_arc ? sol.arc_span : 0.0, 0.0, 0.0);
    return sched;
}

/// Forward trajectory sampled from the closed forms (n samples per phase).
inline TimedTrajectory solution_trajectory(const GameParams& gp, const Solution& sol,
                                           int n_per_phase = 129) {
    TimedTrajectory traj;
    traj.direction = TimeDirection::Forward;
    PiecewiseControls sched = optimal_controls(gp, sol);
    std::vector<double> knots{0.0};
    if (sol.has_arc && sol.arc_span > 0.0) knots.push_back(sol.arc_span);
    knots.push_back(sol.T_star);
    for (std::size_t k = 0; k + 1 < knots.size(); ++k) {
        double a = knots[k], b = knots[k + 1];
        if (!(b > a)) continue;
        int n = std::max(2, n_per_phase);
        for (int i = (k == 0 ? 0 : 1); i < n; ++i) {
            double t = a + (b - a) * i / (n - 1);
            traj.samples.push_back({t, solution_state(gp, sol, t), sched(t)});
        }
    }
    if (traj.samples.empty())
        traj.samples.push_back({0.0, sol.initial_state, sched(0.0)});
    return traj;
}

namespace detail {

struct FamilyFit {
    bool ok = false;
    double p1 = 0.0, p2 = 0.0;
    double miss = std::numeric_limits<double>::infinity();
};

/// Damped 2-D Newton with finite-difference Jacobian (relative step 1e-7).
template <class Eval>
FamilyFit newton2(Eval&& eval, const RelState& target, double p1, double p2, double lo1,
                  double hi1, double lo2, double hi2, double tol) {
    auto clamp1 = [&](double v) { return std::clamp(v, lo1, hi1); };
    auto clamp2 = [&](double v) { return std::clamp(v, lo2, hi2); };
    p1 = clamp1(p1);
    p2 = clamp2(p2);
    FamilyFit fit;
    RelState r = eval(p1, p2) - target;
    double res = r.norm();
    for (int it = 0; it < 60; ++it) {
        if (res <= tol) {
            fit.ok = true;
            break;
        }
        double h1 = 1e-7 * std::max(1.0, std::abs(p1));
        double h2 = 1e-7 * std::max(1.0, std::abs(p2));
        RelState ra = eval(clamp1(p1 + h1), p2) - target;
        RelState rb = eval(p1, clamp2(p2 + h2)) - target;
        double e1 = clamp1(p1 + h1) - p1, e2 = clamp2(p2 + h2) - p2;
        if (e1 == 0.0 || e2 == 0.0) break;
        double j00 = (ra.x - r.x) / e1, j01 = (rb.x - r.x) / e2;
        double j10 = (ra.y - r.y) / e1, j11 = (rb.y - r.y) / e2;
        double det = j00 * j11 - j01 * j10;
        if (!std::isfinite(det) || std::abs(det) < 1e-300) break;
        double d1 = (r.x * j11 - r.y * j01) / det;
        double d2 = (j00 * r.y - j10 * r.x) / det;
        double step = 1.0;
        bool improved = false;
        for (int k = 0; k < 25; ++k) {
            double q1 = clamp1(p1 - step * d1), q2 = clamp2(p2 - step * d2);
            RelState rq = eval(q1, q2) - target;
            double resq = rq.norm();
            if (resq < res) {
                p1 = q1;
                p2 = q2;
                r = rq;
                res = resq;
                improved = true;
                break;
            }
            step *= 0.5;
        }
        if (!improved) break;
    }
    if (res <= tol) fit.ok = true;
    fit.p1 = p1;
    fit.p2 = p2;
    fit.miss = res;
    return fit;
}

/// Multistart lattice followed by Newton polish from the best seeds.
template <class Eval>
FamilyFit invert_family(Eval&& eval, const RelState& target, double lo1, double hi1, double lo2,
                        double hi2, double tol, const std::optional<std::pair<double, double>>&
                        warm) {
    if (warm) {
        FamilyFit fit = newton2(eval, target, warm->first, warm->second, lo1, hi1, lo2, hi2, tol);
        if (fit.ok) return fit;
    }
    constexpr int kLattice = 40;
    struct Seed {
        double p1, p2, miss;
    };
    std::vector<Seed> seeds;
    seeds.reserve(kLattice * kLattice);
    for (int i = 0; i <= kLattice; ++i) {
        double p1 = lo1 + (hi1 - lo1) * i / kLattice;
        for (int j = 0; j <= kLattice; ++j) {
            double p2 = lo2 + (hi2 - lo2) * j / kLattice;
            RelState r = eval(p1, p2) - target;
            seeds.push_back({p1, p2, r.norm()});
        }
    }
    std::partial_sort(seeds.begin(), seeds.begin() + 12, seeds.end(),
                      [](const Seed& a, const Seed& b) { return a.miss < b.miss; });
    FamilyFit best;
    for (int k = 0; k < 12; ++k) {
        FamilyFit fit =
            newton2(eval, target, seeds[k].p1, seeds[k].p2, lo1, hi1, lo2, hi2, tol);
        if (fit.ok) return fit;
        if (fit.miss < best.miss) best = fit;
    }
    return best;
}

}  // namespace detail

/// Warm-start hint carried between neighboring solves.
struct SolveHint {
    bool valid = false;
    Region region = Region::A;
    double p1 = 0.0;
    double p2 = 0.0;
};

namespace detail {

inline Solution make_axis_ride(const GameParams& gp, const RelState& s0, bool dispersal_flag) {
    Solution sol;
    sol.initial_state = s0;
    sol.region = Region::Axis;
    sol.T_star = (gp.rho + s0.y) / gp.closing_speed();
    sol.phases = {{Region::Axis, sol.T_star}};
    sol.terminal_state = {0.0, -gp.rho};
    sol.axis_start_y = s0.y;
    sol.has_axis_phase = true;
    sol.dispersal = dispersal_flag;
    return sol;
}

/// Scan n anchor candidates for a bracket of goal(a) = target, then bisect.
/// `value` must be continuous on [lo, hi].
template <class Fn>
inline std::optional<double> bracketed_bisect(Fn&& value, double lo, double hi, double target,
                                              int n = 256) {
    double prev_a = lo, prev_v = value(lo) - target;
    for (int i = 1; i <= n; ++i) {
        double a = lo + (hi - lo) * i / n;
        double v = value(a) - target;
        if ((prev_v <= 0.0 && v >= 0.0) || (prev_v >= 0.0 && v <= 0.0)) {
            double x0 = prev_a, x1 = a, v0 = prev_v;
            for (int k = 0; k < 100 && x1 - x0 > 1e-14 * std::max(1.0, std::abs(x1)); ++k) {
                double m = 0.5 * (x0 + x1);
                double vm = value(m) - target;
                if ((v0 <= 0.0 && vm <= 0.0) || (v0 >= 0.0 && vm >= 0.0)) {
                    x0 = m;
                    v0 = vm;
                } else {
                    x1 = m;
                }
            }
            return 0.5 * (x0 + x1);
        }
        prev_a = a;
        prev_v = v;
    }
    return std::nullopt;
}

/// Axis states solved analytically (universal surface, dispersal fans and
/// the re-crossing lenses that cover the upper axis).
inline Solution solve_axis(const GameParams& gp, const RelState& s0) {
    const double w = gp.omega_e;
    const double v_r = gp.speed_ratio();
    auto cp = gamma_critical(gp);
    const double y0_sharp_len = cp ? (gp.v_e / w) * cp->y0_sharp : 0.0;

    if (s0.y <= 1e-14 * gp.rho) return make_axis_ride(gp, s0, false);

    if (v_r > 0.5 && cp) {
        double cut = dispersal_height(gp);
        if (s0.y <= cut + 1e-12 * gp.rho)
            return make_axis_ride(gp, s0, s0.y > y0_sharp_len);
        // Lens: tail of a near-tangent arc connecting two axis points. Find
        // the anchor whose second crossing height equals s0.y.
        double lo = 1e-6 * cp->y0_sharp, hi = cp->y0_sharp * (1.0 - 1e-9);
        auto root2_height = [&](double y0t) -> double {
            double t1 = crossing_time(gp, y0t);
            auto t2 = gamma_root_in(v_r, y0t, t1 + 1e-9, 2.0 * std::numbers::pi);
            if (!t2) return std::numeric_limits<double>::infinity();
            return regionB_characteristic(gp, (gp.v_e / w) * y0t, -1, *t2 / w).state.y;
        };
        // Second crossings exist only near the tangency; shrink lo until the
        // bracket is well-defined (heights decrease toward the tangency).
        auto anchor = bracketed_bisect(root2_height, lo, hi, s0.y, 512);
        if (!anchor) raise(ErrorCode::NoCharacteristic, "upper-axis lens inversion failed");
        double y0t = *anchor;
        double y0 = (gp.v_e / w) * y0t;
        double t1 = crossing_time(gp, y0t);
        auto t2 = gamma_root_in(v_r, y0t, t1 + 1e-9, 2.0 * std::numbers::pi);
        if (!t2) raise(ErrorCode::NoCharacteristic, "upper-axis lens lost its second crossing");
        RegionCAnchor a = regionC_anchor(gp, y0);

        Solution sol;
        sol.initial_state = s0;
        sol.region = Region::C;
        sol.dispersal = true;
        sol.has_arc = true;
        sol.arc = {Region::C, y0, -1, a.tau_cross, *t2 / w};
        sol.arc_span = *t2 / w - a.tau_cross;
        sol.axis_start_y = a.y_cross;
        sol.has_axis_phase = true;
        double ride = (gp.rho + a.y_cross) / gp.closing_speed();
        sol.T_star = sol.arc_span + ride;
        sol.phases = {{Region::C, sol.arc_span}, {Region::Axis, ride}};
        sol.terminal_state = {0.0, -gp.rho};
        return sol;
    }

    // v_r <= 1/2: every positive-axis state disperses onto a re-crossing arc
    // anchored below the origin.
    auto cross_height = [&](double y0) -> double {
        double y0t = (w / gp.v_e) * y0;
        auto t1 = gamma_root_in(v_r, y0t, 1e-9, 2.0 * std::numbers::pi);
        if (!t1) return std::numeric_limits<double>::infinity();
        return regionB_characteristic(gp, y0, -1, *t1 / w).state.y;
    };
    auto anchor = bracketed_bisect(cross_height, -gp.rho * (1.0 - 1e-9), -1e-9 * gp.rho, s0.y, 512);
    if (!anchor) raise(ErrorCode::NoCharacteristic, "upper-axis inversion failed");
    double y0 = *anchor;
    double y0t = (w / gp.v_e) * y0;
    auto t1 = gamma_root_in(v_r, y0t, 1e-9, 2.0 * std::numbers::pi);
    if (!t1) raise(ErrorCode::NoCharacteristic, "upper-axis re-crossing lost");

    Solution sol;
    sol.initial_state = s0;
    sol.region = Region::B;
    sol.dispersal = true;
    sol.has_arc = true;
    sol.arc = {Region::B, y0, -1, 0.0, *t1 / w};
    sol.arc_span = *t1 / w;
    sol.axis_start_y = y0;
    sol.has_axis_phase = true;
    double ride = (gp.rho + y0) / gp.closing_speed();
    sol.T_star = sol.arc_span + ride;
    sol.phases = {{Region::B, sol.arc_span}, {Region::Axis, ride}};
    sol.terminal_state = {0.0, -gp.rho};
    return sol;
}

inline Solution mirror_solution(const Solution& in) {
    Solution out = in;
    out.initial_state = mirror(in.initial_state);
    out.terminal_state = mirror(in.terminal_state);
    if (in.has_arc) {
        if (in.arc.region == Region::A)
            out.arc.terminal_param = -in.arc.terminal_param;
        out.arc.ue_sign = -in.arc.ue_sign;
    }
    return out;
}

}  // namespace detail

/**
 * Game-of-degree solution from an arbitrary state of the game set.
 *
 * The characteristic families are inverted in the order A, B, C by damped
 * Newton root-finding over their two parameters; a match is accepted when the
 * closed-form state lands within 1e-9 rho of s0 and the arc is valid up to
 * the matched backward time. Axis states are solved analytically.
 */
inline Solution solve(const GameParams& gp, const RelState& s0,
                      const SolveHint* hint = nullptr) {
    gp.validate();
    if (!gp.evader_faster()) raise(ErrorCode::DegenerateGame, "game of degree requires v_p < v_e");
    const double rho = gp.rho;
    if (s0.norm() > rho * (1.0 + 1e-9)) raise(ErrorCode::Validation, "|s0| must be <= rho");

    // Boundary states that already satisfy the termination condition.
    if (std::abs(s0.norm() - rho) <= 1e-9 * rho && s0.y < -rho * gp.speed_ratio()) {
        Solution sol;
        sol.initial_state = sol.terminal_state = s0;
        sol.T_star = 0.0;
        sol.region = Region::A;
        return sol;
    }

    if (s0.x == 0.0) return detail::solve_axis(gp, s0);

    const bool mirrored = s0.x < 0.0;
    const RelState target = mirrored ? mirror(s0) : s0;
    const double tol = 1e-9 * rho;
    const double theta_up = usable_part_angle(gp);
    const double cap = gp.tau_cap();
    const double tau_hi = std::min(cap, 2.0 * std::numbers::pi / gp.omega_e +
                                            gp.straight_bound());

    std::optional<std::pair<double, double>> warmA, warmB, warmC;
    if (hint && hint->valid) {
        auto pair = std::make_pair(hint->p1, hint->p2);
        if (hint->region == Region::A) warmA = pair;
        if (hint->region == Region::B) warmB = pair;
        if (hint->region == Region::C) warmC = pair;
    }

    double missA = -1.0, missB = -1.0, missC = -1.0;

    // Region A.
    {
        auto eval = [&](double th, double tau) {
            return regionA_characteristic(gp, th, tau).state;
        };
        detail::FamilyFit fit =
            detail::invert_family(eval, target, theta_up + 1e-9, std::numbers::pi - 1e-9, 0.0,
                                  tau_hi, tol, warmA);
        missA = fit.miss;
        if (fit.ok) {
            Characteristic ch{Region::A, fit.p1, -1, 0.0, 0.0};
            ch.validity_end = detail::validity_end(gp, ch);
            if (fit.p2 <= ch.validity_end + 1e-7) {
                Solution sol;
                sol.initial_state = target;
                sol.region = Region::A;
                sol.has_arc = true;
                sol.arc = ch;
                sol.arc_span = fit.p2;
                sol.T_star = fit.p2;
                sol.phases = {{Region::A, fit.p2}};
                sol.terminal_state = {rho * std::sin(fit.p1), rho * std::cos(fit.p1)};
                return mirrored ? detail::mirror_solution(sol) : sol;
            }
        }
    }

    // Region B.
    {
        auto eval = [&](double y0, double tau) {
            return regionB_characteristic(gp, y0, -1, tau).state;
        };
        detail::FamilyFit fit =
            detail::invert_family(eval, target, -rho, 0.0, 0.0, tau_hi, tol, warmB);
        missB = fit.miss;
        if (fit.ok) {
            Characteristic ch{Region::B, fit.p1, -1, 0.0, 0.0};
            ch.validity_end = detail::validity_end(gp, ch);
            if (fit.p2 <= ch.validity_end + 1e-7) {
                Solution sol;
                sol.initial_state = target;
                sol.region = Region::B;
                sol.has_arc = true;
                sol.arc = ch;
                sol.arc_span = fit.p2;
                sol.axis_start_y = fit.p1;
                sol.has_axis_phase = true;
                double ride = (rho + fit.p1) / gp.closing_speed();
                sol.T_star = fit.p2 + ride;
                sol.phases = {{Region::B, fit.p2}, {Region::Axis, ride}};
                sol.terminal_state = {0.0, -rho};
                return mirrored ? detail::mirror_solution(sol) : sol;
            }
        }
    }

    // Region C (only when the upper-axis sliver exists).
    if (gp.speed_ratio() > 0.5) {
        auto cp = gamma_critical(gp);
        if (cp) {
            double y_hi = std::min(cp->y0_sharp * (1.0 - 1e-9), gp.omega_e * rho / gp.v_e);
            auto eval = [&](double y0t, double sigma) {
                return regionC_characteristic(gp, (gp.v_e / gp.omega_e) * y0t, -1, sigma).state;
            };
            detail::FamilyFit fit = detail::invert_family(
                eval, target, 1e-9 * cp->y0_sharp, y_hi, 0.0,
                std::min(tau_hi, 2.0 * std::numbers::pi / gp.omega_e), tol, warmC);
            missC = fit.miss;
            if (fit.ok) {
                RegionCAnchor a = regionC_anchor(gp, (gp.v_e / gp.omega_e) * fit.p1);
                Characteristic ch{Region::C, a.y0, -1, a.tau_cross, 0.0};
                ch.validity_end = detail::validity_end(gp, ch);
                if (a.tau_cross + fit.p2 <= ch.validity_end + 1e-7) {
                    Solution sol;
                    sol.initial_state = target;
                    sol.region = Region::C;
                    sol.has_arc = true;
                    sol.arc = ch;
                    sol.arc_span = fit.p2;
                    sol.axis_start_y = a.y_cross;
                    sol.has_axis_phase = true;
                    double ride = (rho + a.y_cross) / gp.closing_speed();
                    sol.T_star = fit.p2 + ride;
                    sol.phases = {{Region::C, fit.p2}, {Region::Axis, ride}};
                    sol.terminal_state = {0.0, -rho};
                    return mirrored ? detail::mirror_solution(sol) : sol;
                }
            }
        }
    }

    std::ostringstream msg;
    msg << "no characteristic family matched s0=(" << s0.x << "," << s0.y
        << "); nearest misses: A=" << missA << " B=" << missB << " C=" << missC;
    raise(ErrorCode::NoCharacteristic, msg.str());
}

/// Straight-line escape (u_e = 0) against the worst pursuer response.
inline Solution straight_line_escape(const GameParams& gp, const RelState& s0) {
    gp.validate();
    gp.require_evader_faster();
    if (s0.norm() > gp.rho * (1.0 + 1e-9)) raise(ErrorCode::Validation, "|s0| must be <= rho");
    double x = std::clamp(s0.x, -gp.rho, gp.rho);
    double reach = std::sqrt(std::max(0.0, gp.rho * gp.rho - x * x));
    Solution sol;
    sol.straight_line = true;
    sol.initial_state = s0;
    sol.T_star = std::max(0.0, (s0.y + reach) / gp.closing_speed());
    sol.phases = {{Region::Axis, sol.T_star}};
    sol.region = Region::Axis;
    sol.axis_start_y = s0.y;
    sol.terminal_state = {s0.x, -reach};
    return sol;
}

/// Replay report produced by integrating the optimal schedule forward.
struct ReplayReport {
    double terminal_range_error = 0.0;
    double max_state_deviation = 0.0;
    double replay_time = 0.0;
    double transversality = 0.0;
    bool passed = false;
};

/**
 * Integrate the optimal controls from s0 with the fixed-step integrator and
 * compare against the closed-form synthesis. Raises ReplayDiverged when the
 * replay leaves the closed-form path by more than 1e-2 rho.
 */
inline ReplayReport forward_verify(const GameParams& gp, const Solution& sol,
                                   double dt = -1.0) {
    if (dt <= 0.0) dt = gp.default_dt();
    if (sol.T_star <= 0.0) {
        ReplayReport rep;
        rep.transversality = 1.0;
        rep.passed = true;
        return rep;
    }
    PiecewiseControls sched = optimal_controls(gp, sol);
    std::vector<EventSpec> events{radius_exit_event(gp)};
    double span = sol.T_star + std::max(10.0 * dt, 1e-3 * sol.T_star);
    IntegrationResult res =
        integrate(gp, sol.initial_state, sched, TimeDirection::Forward, span, dt, events);

    ReplayReport rep;
    double dev = 0.0;
    for (const TrajectorySample& smp : res.trajectory.samples) {
        RelState ref = solution_state(gp, sol, smp.t);
        dev = std::max(dev, (smp.state - ref).norm());
    }
    rep.max_state_deviation = dev;
    const TrajectorySample& last = res.trajectory.back();
    rep.replay_time = last.t;
    rep.terminal_range_error = std::abs(last.state.norm() - gp.rho);
    rep.transversality = radial_rate(gp, last.state, last.controls);
    rep.passed = res.terminated_by_event && rep.terminal_range_error < 1e-5 * gp.rho &&
                 dev < 1e-5 * gp.rho && rep.transversality > 0.0 &&
                 std::abs(rep.replay_time - sol.T_star) <=
                     1e-5 * std::max(1.0, std::abs(sol.T_star));
    if (dev > 1e-2 * gp.rho)
        raise(ErrorCode::ReplayDiverged, "replay left the closed-form trajectory");
    return rep;
}

}  // namespace sev
