#pragma once

#include <charconv>
#include <fstream>
#include <ostream>
#include <string>

#include "sev/errors.hpp"
#include "sev/inertial.hpp"
#include "sev/integrate.hpp"
#include "sev/value_grid.hpp"

namespace sev {

/// Shortest decimal representation that round-trips the double exactly.
inline std::string format_double(double v) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

inline void write_relative_csv(std::ostream& os, const TimedTrajectory& traj) {
    os << "t,x,y,u_e,u_p\n";
    for (const TrajectorySample& s : traj.samples) {
        os << format_double(s.t) << ',' << format_double(s.state.x) << ','
           << format_double(s.state.y) << ',' << format_double(s.controls.u_e) << ','
           << format_double(s.controls.u_p_wrapped()) << '\n';
    }
}

inline void write_inertial_csv(std::ostream& os, const InertialTrajectory& traj) {
    os << "t,xe,ye,theta_e,xp,yp\n";
    for (const InertialSample& s : traj.samples) {
        os << format_double(s.t) << ',' << format_double(s.state.xe) << ','
           << format_double(s.state.ye) << ',' << format_double(wrap_angle(s.state.theta_e))
           << ',' << format_double(s.state.xp) << ',' << format_double(s.state.yp) << '\n';
    }
}

inline void write_grid_csv(std::ostream& os, const ValueGrid& grid) {
    os << "x,y,value,region\n";
    for (int j = 0; j < grid.resolution; ++j) {
        for (int i = 0; i < grid.resolution; ++i) {
            os << format_double(grid.coord(i)) << ',' << format_double(grid.coord(j)) << ','
               << format_double(grid.values[grid.index(i, j)]) << ','
               << cell_tag_name(grid.tags[grid.index(i, j)]) << '\n';
        }
    }
}

inline std::ofstream open_output(const std::string& path) {
    std::ofstream os(path);
    if (!os) raise(ErrorCode::Validation, "cannot open output path: " + path);
    return os;
}

}  // namespace sev
