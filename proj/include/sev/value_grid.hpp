#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "sev/errors.hpp"
#include "sev/parallel.hpp"
#include "sev/params.hpp"
#include "sev/pure_pursuit.hpp"
#include "sev/solve.hpp"
#include "sev/state.hpp"

namespace sev {

inline constexpr double kGridSentinel = -1.0;  // value written for cells outside the game set

/// Cell tags used in grid exports.
enum class CellTag { A, B, C, Axis, PurePursuit, Outside, Failed };

inline const char* cell_tag_name(CellTag t) {
    switch (t) {
        case CellTag::A: return "A";
        case CellTag::B: return "B";
        case CellTag::C: return "C";
        case CellTag::Axis: return "Axis";
        case CellTag::PurePursuit: return "pp";
        case CellTag::Outside: return "out";
        case CellTag::Failed: return "failed";
    }
    return "?";
}

inline CellTag cell_tag_from_region(Region r) {
    switch (r) {
        case Region::A: return CellTag::A;
        case Region::B: return CellTag::B;
        case Region::C: return CellTag::C;
        case Region::Axis: return CellTag::Axis;
    }
    return CellTag::Failed;
}

/// Rectangular sampling of a value function over [-rho, rho]^2.
struct ValueGrid {
    int resolution = 0;
    double rho = 0.0;
    std::vector<double> values;  // row-major, index j * resolution + i
    std::vector<CellTag> tags;
    std::vector<std::string> diagnostics;  // per failed cell

    double coord(int i) const { return -rho + 2.0 * rho * i / (resolution - 1); }
    int index(int i, int j) const { return j * resolution + i; }
    double at(int i, int j) const { return values[index(i, j)]; }
    bool inside(int i, int j) const {
        double x = coord(i), y = coord(j);
        return x * x + y * y <= rho * rho * (1.0 + 1e-12);
    }

    double max_value() const {
        double m = 0.0;
        for (double v : values)
            if (v != kGridSentinel) m = std::max(m, v);
        return m;
    }
};

inline void validate_resolution(int res) {
    if (res < 3 || res % 2 == 0)
        raise(ErrorCode::Validation, "resolution must be odd and >= 3");
}

/**
 * Game value under optimal play on a res x res grid. Cells are solved via
 * the characteristic families with warm starts chained along each row;
 * x < 0 cells are mirrored from the solved half (y-axis symmetry). Failed
 * cells carry the sentinel and a diagnostic instead of aborting the sweep.
 */
inline ValueGrid value_grid(const GameParams& gp, int res, int jobs = 0) {
    gp.validate();
    gp.require_evader_faster(ErrorCode::DegenerateGame);
    validate_resolution(res);

    ValueGrid grid;
    grid.resolution = res;
    grid.rho = gp.rho;
    grid.values.assign(static_cast<std::size_t>(res) * res, kGridSentinel);
    grid.tags.assign(static_cast<std::size_t>(res) * res, CellTag::Outside);

    const int mid = res / 2;  // index of the x = 0 column
    std::vector<std::string> row_diag(res);

    parallel_for(res, resolve_jobs(jobs), [&](int j) {
        SolveHint hint;  // row-local warm start, deterministic per row
        for (int i = mid; i < res; ++i) {
            if (!grid.inside(i, j)) continue;
            RelState s{grid.coord(i), grid.coord(j)};
            try {
                Solution sol = solve(gp, s, hint.valid ? &hint : nullptr);
                grid.values[grid.index(i, j)] = sol.T_star;
                grid.tags[grid.index(i, j)] = cell_tag_from_region(sol.region);
                if (sol.has_arc) {
                    hint.valid = true;
                    hint.region = sol.arc.region;
                    if (sol.arc.region == Region::A) {
                        hint.p1 = sol.arc.terminal_param;
                        hint.p2 = sol.arc_span;
                    } else if (sol.arc.region == Region::B) {
                        hint.p1 = sol.arc.terminal_param;
                        hint.p2 = sol.arc_span;
                    } else {
                        hint.p1 = (gp.omega_e / gp.v_e) * sol.arc.terminal_param;
                        hint.p2 = sol.arc_span;
                    }
                }
            } catch (const GameError& e) {
                grid.tags[grid.index(i, j)] = CellTag::Failed;
                if (row_diag[j].empty())
                    row_diag[j] = "cell(" + std::to_string(i) + "," + std::to_string(j) +
                                  "): " + e.what();
            }
        }
    });

    // Mirror the solved half onto x < 0 (Corollary-style symmetry).
    for (int j = 0; j < res; ++j) {
        for (int i = 0; i < mid; ++i) {
            int src = grid.index(2 * mid - i, j);
            int dst = grid.index(i, j);
            if (grid.inside(i, j)) {
                grid.values[dst] = grid.values[src];
                grid.tags[dst] = grid.tags[src];
            }
        }
    }
    for (const std::string& d : row_diag)
        if (!d.empty()) grid.diagnostics.push_back(d);
    return grid;
}

/// Escape-time grid for the equilibrium evader against a pure-pursuit
/// pursuer, mirrored across the y-axis like the optimal grid.
inline ValueGrid pure_pursuit_grid(const GameParams& gp, int res, int jobs = 0,
                                   double dt = -1.0) {
    gp.validate();
    gp.require_evader_faster(ErrorCode::DegenerateGame);
    validate_resolution(res);

    ValueGrid grid;
    grid.resolution = res;
    grid.rho = gp.rho;
    grid.values.assign(static_cast<std::size_t>(res) * res, kGridSentinel);
    grid.tags.assign(static_cast<std::size_t>(res) * res, CellTag::Outside);
    const int mid = res / 2;

    parallel_for(res, resolve_jobs(jobs), [&](int j) {
        for (int i = mid; i < res; ++i) {
            if (!grid.inside(i, j)) continue;
            RelState s{grid.coord(i), grid.coord(j)};
            try {
                grid.values[grid.index(i, j)] = pure_pursuit_time(gp, s, dt);
                grid.tags[grid.index(i, j)] = CellTag::PurePursuit;
            } catch (const GameError&) {
                grid.tags[grid.index(i, j)] = CellTag::Failed;
            }
        }
    });
    for (int j = 0; j < res; ++j) {
        for (int i = 0; i < mid; ++i) {
            if (grid.inside(i, j)) {
                grid.values[grid.index(i, j)] = grid.values[grid.index(2 * mid - i, j)];
                grid.tags[grid.index(i, j)] = grid.tags[grid.index(2 * mid - i, j)];
            }
        }
    }
    return grid;
}

}  // namespace sev
