#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <vector>

#include "sev/errors.hpp"
#include "sev/parallel.hpp"
#include "sev/params.hpp"
#include "sev/value_grid.hpp"

namespace sev {

/**
 * Independent verification oracle: semi-Lagrangian fixed-point iteration for
 * the min-max time-to-go on the grid.
 *
 * Per cell, V = min over u_e in {-1, 0, +1} of max over n_headings pursuer
 * headings of (Delta + interpolated V at the Delta-step image); steps that
 * leave the disk contribute the exact in-disk fraction of Delta. Stencil
 * nodes outside the disk are replaced by the nearest in-disk stencil value
 * (one-sided handling at the boundary). Sweeps are Jacobi: every cell of a
 * sweep reads the previous iterate, so results are independent of the thread
 * count. Iteration stops when the sup-norm change drops below 1e-6 * Delta.
 *
 * `step_cells` sets the advection length per step in units of the grid
 * spacing (image displacement <= step_cells * dx for the fastest motion).
 */
inline ValueGrid dp_oracle(const GameParams& gp, int res, int n_headings, int jobs = 0,
                           double step_cells = 2.0) {
    gp.validate();
    gp.require_evader_faster(ErrorCode::DegenerateGame);
    if (res < 51) raise(ErrorCode::Validation, "dp_oracle resolution must be >= 51");
    if (res % 2 == 0) raise(ErrorCode::Validation, "dp_oracle resolution must be odd");
    if (n_headings < 16) raise(ErrorCode::Validation, "dp_oracle needs >= 16 headings");

    const double rho = gp.rho;
    const double dx = 2.0 * rho / (res - 1);
    const double v_max = gp.omega_e * rho + gp.v_e + gp.v_p;
    const double delta = step_cells * dx / v_max;

    const int n = res * res;
    std::vector<double> v_old(n, 0.0), v_new(n, 0.0);
    std::vector<std::uint8_t> inside(n, 0);
    std::vector<double> px(res), py(res);
    for (int i = 0; i < res; ++i) px[i] = -rho + 2.0 * rho * i / (res - 1);
    py = px;
    for (int j = 0; j < res; ++j)
        for (int i = 0; i < res; ++i)
            inside[j * res + i] = (px[i] * px[i] + py[j] * py[j] <= rho * rho * (1.0 + 1e-12));

    std::vector<double> hx(n_headings), hy(n_headings);
    for (int k = 0; k < n_headings; ++k) {
        double up = -std::numbers::pi + 2.0 * std::numbers::pi * (k + 1) / n_headings;
        hx[k] = gp.v_p * std::sin(up);
        hy[k] = gp.v_p * std::cos(up);
    }

    auto interp = [&](double x, double y) -> double {
        double gx = (x + rho) / dx, gy = (y + rho) / dx;
        int ix = static_cast<int>(gx), iy = static_cast<int>(gy);
        ix = std::min(std::max(ix, 0), res - 2);
        iy = std::min(std::max(iy, 0), res - 2);
        double fx = gx - ix, fy = gy - iy;
        int base = iy * res + ix;
        double c00 = v_old[base], c10 = v_old[base + 1];
        double c01 = v_old[base + res], c11 = v_old[base + res + 1];
        std::uint8_t m00 = inside[base], m10 = inside[base + 1];
        std::uint8_t m01 = inside[base + res], m11 = inside[base + res + 1];
        if (m00 + m10 + m01 + m11 < 4) {
            // Replace out-of-disk corners with the nearest in-disk corner value.
            double fallback = 0.0;
            double best = 1e300;
            auto consider = [&](std::uint8_t m, double val, double ddx, double ddy) {
                if (!m) return;
                double d = ddx * ddx + ddy * ddy;
                if (d < best) {
                    best = d;
                    fallback = val;
                }
            };
            consider(m00, c00, fx, fy);
            consider(m10, c10, 1.0 - fx, fy);
            consider(m01, c01, fx, 1.0 - fy);
            consider(m11, c11, 1.0 - fx, 1.0 - fy);
            if (best == 1e300) return 0.0;
            if (!m00) c00 = fallback;
            if (!m10) c10 = fallback;
            if (!m01) c01 = fallback;
            if (!m11) c11 = fallback;
        }
        return (1.0 - fx) * ((1.0 - fy) * c00 + fy * c01) + fx * ((1.0 - fy) * c10 + fy * c11);
    };

    const double rho2 = rho * rho;
    auto cell_update = [&](int i, int j) -> double {
        const double x = px[i], y = py[j];
        const double r2 = x * x + y * y;
        double best_e = 1e300;
        for (int ue = -1; ue <= 1; ++ue) {
            double bx = -gp.omega_e * y * ue;
            double by = gp.omega_e * x * ue - gp.v_e;
            double worst = -1e300;
            for (int k = 0; k < n_headings; ++k) {
                double fx = bx + hx[k], fy = by + hy[k];
                double ix = x + delta * fx, iy = y + delta * fy;
                double val;
                if (ix * ix + iy * iy > rho2) {
                    // Exact fraction of the step spent inside the disk.
                    double a = (fx * fx + fy * fy) * delta * delta;
                    double b = 2.0 * delta * (x * fx + y * fy);
                    double c = r2 - rho2;
                    double disc = b * b - 4.0 * a * c;
                    double frac = 1.0;
                    if (disc >= 0.0 && a > 0.0) {
                        double root = (-b + std::sqrt(disc)) / (2.0 * a);
                        frac = std::min(std::max(root, 0.0), 1.0);
                    }
                    val = frac * delta;
                } else {
                    val = delta + interp(ix, iy);
                }
                if (val > worst) worst = val;
            }
            if (worst < best_e) best_e = worst;
        }
        return best_e;
    };

    const double tol = 1e-6 * delta;
    const int max_sweeps =
        static_cast<int>(2.5 * gp.straight_bound() / delta) + 2000;
    const int workers = resolve_jobs(jobs);
    std::vector<double> row_change(res, 0.0);
    bool converged = false;
    for (int sweep = 0; sweep < max_sweeps; ++sweep) {
        parallel_for(res, workers, [&](int j) {
            double ch = 0.0;
            for (int i = 0; i < res; ++i) {
                int idx = j * res + i;
                if (!inside[idx]) {
                    v_new[idx] = 0.0;
                    continue;
                }
                double v = cell_update(i, j);
                ch = std::max(ch, std::abs(v - v_old[idx]));
                v_new[idx] = v;
            }
            row_change[j] = ch;
        });
        std::swap(v_old, v_new);
        double change = 0.0;
        for (double c : row_change) change = std::max(change, c);
        if (change < tol) {
            converged = true;
            break;
        }
    }
    if (!converged) raise(ErrorCode::NoConvergence, "dp_oracle fixed point did not converge");

    ValueGrid grid;
    grid.resolution = res;
    grid.rho = rho;
    grid.values.assign(static_cast<std::size_t>(n), kGridSentinel);
    grid.tags.assign(static_cast<std::size_t>(n), CellTag::Outside);
    for (int idx = 0; idx < n; ++idx) {
        if (inside[idx]) {
            grid.values[idx] = v_old[idx];
            grid.tags[idx] = CellTag::Axis;  // oracle grids carry no region synthesis
        }
    }
    return grid;
}

/// Fraction of in-disk cells of two same-shaped grids agreeing within tol.
struct GridAgreement {
    int interior_cells = 0;
    int within_tol = 0;
    double worst = 0.0;
    double fraction() const {
        return interior_cells == 0 ? 0.0 : static_cast<double>(within_tol) / interior_cells;
    }
};

inline GridAgreement grid_agreement(const ValueGrid& a, const ValueGrid& b, double tol) {
    GridAgreement out;
    if (a.resolution != b.resolution || a.values.size() != b.values.size())
        raise(ErrorCode::Validation, "grid shapes differ");
    for (std::size_t k = 0; k < a.values.size(); ++k) {
        if (a.values[k] == kGridSentinel || b.values[k] == kGridSentinel) continue;
        ++out.interior_cells;
        double d = std::abs(a.values[k] - b.values[k]);
        out.worst = std::max(out.worst, d);
        if (d <= tol) ++out.within_tol;
    }
    return out;
}

}  // namespace sev
