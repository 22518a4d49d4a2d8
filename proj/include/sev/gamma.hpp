#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <mutex>
#include <vector>
#include <numbers>
#include <optional>

#include "sev/errors.hpp"
#include "sev/params.hpp"

namespace sev {

/// Scaled coordinates for the axis-crossing analysis: tau_tilde = omega_e tau,
/// y0_tilde = (omega_e / v_e) y0, v_r = v_p / v_e.
struct ScaledCoords {
    double tau_tilde = 0.0;
    double y0_tilde = 0.0;
    double v_r = 0.0;
};

/**
 * Crossing function for characteristics emitted from the y-axis.
 *
 * The x-component of the axis-anchored closed-form arc, scaled by
 * omega_e / v_e, equals -ue_sign * gamma(v_r, omega tau, (omega/v_e) y0).
 * Its zeros are the backward times at which an arc re-crosses the axis.
 */
inline double gamma(double v_r, double tau_tilde, double y0_tilde) {
    // 1 - cos written as 2 sin^2(tau/2): the naive form cancels to zero near
    // tau = 0 and swallows the first term for small anchors.
    double half = std::sin(0.5 * tau_tilde);
    return (y0_tilde - v_r * tau_tilde) * std::sin(tau_tilde) + 2.0 * half * half;
}

inline double gamma_dtau(double v_r, double tau_tilde, double y0_tilde) {
    return (1.0 - v_r) * std::sin(tau_tilde) + (y0_tilde - v_r * tau_tilde) * std::cos(tau_tilde);
}

/// Tangency point of the gamma zero set: gamma = 0 and d(gamma)/d(tau) = 0.
struct CriticalPoint {
    double tau_sharp = 0.0;  // scaled backward time, in (0, 2 pi)
    double y0_sharp = 0.0;   // scaled axis height, in (0, omega rho / v_e]
};

/**
 * Locate the critical point of gamma for the given parameters.
 *
 * Returns std::nullopt when v_r <= 1/2 (the zero set has no interior branch)
 * or when the tangency lies outside the admissible box
 * [0, 2 pi) x [0, omega rho / v_e]. Otherwise scans a 200 x 200 grid of the
 * box for the best seed and polishes it with a damped 2-D Newton iteration on
 * (gamma, d gamma / d tau) using finite-difference Jacobians, accepting only
 * residuals below 1e-10.
 */
inline std::optional<CriticalPoint> gamma_critical(const GameParams& gp) {
    gp.validate();
    gp.require_evader_faster();
    const double v_r = gp.speed_ratio();
    if (v_r <= 0.5) return std::nullopt;

    const double box_tau = 2.0 * std::numbers::pi;
    const double box_y = gp.omega_e * gp.rho / gp.v_e;

    // Deterministic for fixed (v_r, box), so memoize: the solver invokes this
    // on every region-C evaluation.
    static std::mutex cache_mutex;
    static std::map<std::pair<double, double>, std::optional<CriticalPoint>> cache;
    {
        std::lock_guard<std::mutex> lock(cache_mutex);
        auto it = cache.find({v_r, box_y});
        if (it != cache.end()) return it->second;
    }
    auto memo = [&](std::optional<CriticalPoint> value) {
        std::lock_guard<std::mutex> lock(cache_mutex);
        cache.emplace(std::make_pair(v_r, box_y), value);
        return value;
    };

    // 200 x 200 scan of the box. The zero set degenerates along tau = 0, so
    // Newton is launched from the best cell of each coarse block and the
    // converged tangency with the largest height wins (the degenerate corner
    // polishes to height zero and loses).
    const int n = 200, blocks = 8;
    struct Seed {
        double t = 0.0, y = 0.0;
        double score = std::numeric_limits<double>::infinity();
    };
    std::vector<Seed> seeds(static_cast<std::size_t>(blocks) * blocks);
    for (int i = 1; i < n; ++i) {
        double tt = box_tau * i / n;
        for (int j = 0; j <= n; ++j) {
            double yy = box_y * j / n;
            double g = gamma(v_r, tt, yy);
            double gt = gamma_dtau(v_r, tt, yy);
            double score = g * g + gt * gt;
            Seed& s = seeds[(i * blocks / n) * blocks + std::min(j * blocks / n, blocks - 1)];
            if (score < s.score) s = {tt, yy, score};
        }
    }

    auto F = [&](double a, double b, double& f0, double& f1) {
        f0 = gamma(v_r, a, b);
        f1 = gamma_dtau(v_r, a, b);
    };
    auto polish = [&](double t, double y) -> std::optional<CriticalPoint> {
        double f0, f1;
        F(t, y, f0, f1);
        for (int it = 0; it < 100; ++it) {
            double r = std::hypot(f0, f1);
            if (r < 1e-13) break;
            double ht = 1e-7 * std::max(1.0, std::abs(t));
            double hy = 1e-7 * std::max(1.0, std::abs(y));
            double a0, a1, b0, b1;
            F(t + ht, y, a0, a1);
            F(t, y + hy, b0, b1);
            double j00 = (a0 - f0) / ht, j01 = (b0 - f0) / hy;
            double j10 = (a1 - f1) / ht, j11 = (b1 - f1) / hy;
            double det = j00 * j11 - j01 * j10;
            if (!std::isfinite(det) || std::abs(det) < 1e-300) break;
            double dt = (f0 * j11 - f1 * j01) / det;
            double dy = (j00 * f1 - j10 * f0) / det;
            bool improved = false;
            double step = 1.0;
            for (int k = 0; k < 30; ++k) {
                double tn = t - step * dt, yn = y - step * dy;
                double g0, g1;
                F(tn, yn, g0, g1);
                if (std::hypot(g0, g1) < r) {
                    t = tn;
                    y = yn;
                    f0 = g0;
                    f1 = g1;
                    improved = true;
                    break;
                }
                step *= 0.5;
            }
            if (!improved) break;
        }
        if (std::abs(gamma(v_r, t, y)) > 1e-10 || std::abs(gamma_dtau(v_r, t, y)) > 1e-10)
            return std::nullopt;
        if (!(t > 1e-9) || t >= box_tau || y < 0.0 || y > box_y * (1.0 + 1e-12))
            return std::nullopt;
        return CriticalPoint{t, y};
    };

    std::optional<CriticalPoint> best;
    for (const Seed& s : seeds) {
        if (!std::isfinite(s.score)) continue;
        auto cand = polish(s.t, s.y);
        if (cand && (!best || cand->y0_sharp > best->y0_sharp)) best = cand;
    }
    if (best && best->y0_sharp <= 1e-9 * box_y) best = std::nullopt;
    return memo(best);
}

/**
 * Unique root tau_tilde of gamma(., y0_tilde) in (0, tau_sharp) for axis
 * anchors 0 < y0_tilde < y0_sharp, bracketed and bisected to 1e-12.
 */
inline double crossing_time(const GameParams& gp, double y0_tilde) {
    gp.validate();
    const double v_r = gp.speed_ratio();
    if (v_r <= 0.5) raise(ErrorCode::WrongRegime, "crossing_time requires v_r > 1/2");
    auto cp = gamma_critical(gp);
    if (!cp) raise(ErrorCode::WrongRegime, "no critical point for these parameters");
    if (!(y0_tilde > 0.0) || !(y0_tilde < cp->y0_sharp))
        raise(ErrorCode::OutOfRange, "y0_tilde outside (0, y0_sharp)");

    double lo = std::min(1e-9, 1e-3 * y0_tilde), hi = cp->tau_sharp;
    double glo = gamma(v_r, lo, y0_tilde);
    double ghi = gamma(v_r, hi, y0_tilde);
    if (!(glo > 0.0) || !(ghi < 0.0))
        raise(ErrorCode::NoConvergence, "crossing_time bracket failed");
    while (hi - lo > 1e-12) {
        double mid = 0.5 * (lo + hi);
        (gamma(v_r, mid, y0_tilde) > 0.0 ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

/// Roots of gamma(., y0_tilde) in (lo, hi), located by scan + bisection.
/// Used for the second axis crossing of near-tangent arcs.
inline std::optional<double> gamma_root_in(double v_r, double y0_tilde, double lo, double hi,
                                           int scan = 400) {
    double prev_t = lo, prev_g = gamma(v_r, lo, y0_tilde);
    for (int i = 1; i <= scan; ++i) {
        double t = lo + (hi - lo) * i / scan;
        double g = gamma(v_r, t, y0_tilde);
        if ((prev_g < 0.0 && g >= 0.0) || (prev_g > 0.0 && g <= 0.0)) {
            double a = prev_t, b = t;
            double ga = prev_g;
            while (b - a > 1e-12) {
                double m = 0.5 * (a + b);
                double gm = gamma(v_r, m, y0_tilde);
                if ((ga < 0.0 && gm < 0.0) || (ga > 0.0 && gm > 0.0)) {
                    a = m;
                    ga = gm;
                } else {
                    b = m;
                }
            }
            return 0.5 * (a + b);
        }
        prev_t = t;
        prev_g = g;
    }
    return std::nullopt;
}

}  // namespace sev
