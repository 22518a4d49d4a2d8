#pragma once

// Surveillance-evasion differential game between an agile pursuer and a
// turn-limited evader: game-of-kind classification, closed-form game-of-degree
// synthesis, value grids and a dynamic-programming cross-check.

#include "sev/boundary.hpp"
#include "sev/characteristics.hpp"
#include "sev/dp.hpp"
#include "sev/dynamics.hpp"
#include "sev/errors.hpp"
#include "sev/feedback.hpp"
#include "sev/gamma.hpp"
#include "sev/inertial.hpp"
#include "sev/integrate.hpp"
#include "sev/io.hpp"
#include "sev/kind.hpp"
#include "sev/params.hpp"
#include "sev/pure_pursuit.hpp"
#include "sev/schedule.hpp"
#include "sev/solve.hpp"
#include "sev/state.hpp"
#include "sev/value_grid.hpp"
