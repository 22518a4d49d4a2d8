#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "sev/sev.hpp"

using namespace sev;
using Catch::Approx;

namespace {

constexpr double kPi = std::numbers::pi;

const GameParams kFig8{2.0, 1.0, 1.0, 1.0};   // v_r = 1/2
const GameParams kFig9{1.5, 1.0, 1.0, 1.0};   // v_r = 2/3

struct ArcSpec {
    Region region;
    double param;  // theta0 (A) or y0 (B, C)
    int ue_sign;
};

CharPoint eval_arc(const GameParams& gp, const ArcSpec& a, double tau) {
    switch (a.region) {
        case Region::A: return regionA_characteristic(gp, a.param, tau);
        case Region::B: return regionB_characteristic(gp, a.param, a.ue_sign, tau);
        case Region::C: return regionC_characteristic(gp, a.param, a.ue_sign, tau);
        default: break;
    }
    FAIL("bad region");
    return {};
}

/// Independent ODE-residual oracle: central finite differences of the closed
/// form against the negated dynamics (backward time).
double state_residual(const GameParams& gp, const ArcSpec& a, double tau, double h = 1e-5) {
    CharPoint lo = eval_arc(gp, a, tau - h);
    CharPoint hi = eval_arc(gp, a, tau + h);
    CharPoint mid = eval_arc(gp, a, tau);
    RelState fd{(hi.state.x - lo.state.x) / (2 * h), (hi.state.y - lo.state.y) / (2 * h)};
    RelState f = relative_dynamics(gp, mid.state, mid.controls);
    return RelState{fd.x + f.x, fd.y + f.y}.norm();
}

double adjoint_residual(const GameParams& gp, const ArcSpec& a, double tau, double h = 1e-5) {
    CharPoint lo = eval_arc(gp, a, tau - h);
    CharPoint hi = eval_arc(gp, a, tau + h);
    CharPoint mid = eval_arc(gp, a, tau);
    AdjointState fd{(hi.adjoint.px - lo.adjoint.px) / (2 * h),
                    (hi.adjoint.py - lo.adjoint.py) / (2 * h)};
    AdjointState rate =
        adjoint_rate(gp, mid.adjoint, mid.controls.u_e, TimeDirection::Backward);
    return std::hypot(fd.px - rate.px, fd.py - rate.py);
}

std::vector<ArcSpec> sample_arcs(const GameParams& gp, Region region, int count) {
    std::vector<ArcSpec> arcs;
    if (region == Region::A) {
        double lo = usable_part_angle(gp) + 1e-3;
        double hi = kPi - 1e-3;
        for (int k = 0; k < count; ++k)
            arcs.push_back({Region::A, lo + (hi - lo) * (k + 0.5) / count, -1});
    } else if (region == Region::B) {
        for (int k = 0; k < count; ++k)
            arcs.push_back({Region::B, -gp.rho * (k + 0.5) / count, -1});
    } else {
        auto cp = gamma_critical(gp);
        REQUIRE(cp.has_value());
        double hi = (gp.v_e / gp.omega_e) * cp->y0_sharp;
        for (int k = 0; k < count; ++k)
            arcs.push_back({Region::C, hi * (k + 0.5) / (count + 1), -1});
    }
    return arcs;
}

double arc_validity_span(const GameParams& gp, const ArcSpec& a) {
    Characteristic ch{a.region, a.param, a.ue_sign, 0.0, 0.0};
    if (a.region == Region::C) ch.validity_begin = regionC_anchor(gp, a.param).tau_cross;
    return detail::validity_end(gp, ch) - ch.validity_begin;
}

}  // namespace

TEST_CASE("boundary classification") {
    GameParams gp = kFig8;  // v_r = 0.5
    CHECK(boundary_class(gp, {0.0, -1.0}) == BoundaryClass::UP);
    CHECK(boundary_class(gp, {0.0, 1.0}) == BoundaryClass::NUP);
    double y = -gp.rho * gp.speed_ratio();
    auto on_circle = [&](double yy) {
        return RelState{std::sqrt(gp.rho * gp.rho - yy * yy), yy};
    };
    CHECK(boundary_class(gp, on_circle(y)) == BoundaryClass::BUP);
    CHECK(boundary_class(gp, on_circle(y - 1e-6)) == BoundaryClass::UP);
    CHECK(boundary_class(gp, on_circle(y + 1e-6)) == BoundaryClass::NUP);
    CHECK_THROWS_AS(boundary_class(gp, {0.0, 0.5}), GameError);
}

TEST_CASE("hamiltonian basics") {
    GameParams gp = kFig8;
    CHECK(hamiltonian(gp, {0.3, -0.2}, {0.0, 0.0}, {0.5, 1.0}) == Approx(1.0));
}

TEST_CASE("adjoint rate basics") {
    GameParams gp{2.0, 1.0, 1.3, 1.0};
    AdjointState r = adjoint_rate(gp, {0.0, 1.0}, 1.0, TimeDirection::Forward);
    CHECK(r.px == Approx(-gp.omega_e));
    CHECK(r.py == Approx(0.0).margin(1e-15));
    AdjointState z = adjoint_rate(gp, {0.4, -0.3}, 0.0, TimeDirection::Forward);
    CHECK(z.px == 0.0);
    CHECK(z.py == 0.0);
    AdjointState fwd = adjoint_rate(gp, {0.2, 0.7}, -1.0, TimeDirection::Forward);
    AdjointState bwd = adjoint_rate(gp, {0.2, 0.7}, -1.0, TimeDirection::Backward);
    CHECK(fwd.px == Approx(-bwd.px));
    CHECK(fwd.py == Approx(-bwd.py));
}

TEST_CASE("switching function basics") {
    CHECK(switch_sigma({0.4, -0.6}, {0.8, -1.2}) == Approx(0.0).margin(1e-15));
    GameParams gp = kFig8;
    CharPoint p0 = regionA_characteristic(gp, 2.5, 0.0);
    CHECK(switch_sigma(p0.state, p0.adjoint) == Approx(0.0).margin(1e-12));
}

TEST_CASE("region A terminal point and pursuer heading") {
    GameParams gp = kFig9;
    double theta0 = 2.6;
    CharPoint p = regionA_characteristic(gp, theta0, 0.0);
    CHECK(p.state.x == Approx(gp.rho * std::sin(theta0)));
    CHECK(p.state.y == Approx(gp.rho * std::cos(theta0)));
    CHECK(p.controls.u_p == Approx(kPi + theta0));
    CHECK(p.controls.u_e == Approx(-1.0));

    CHECK_THROWS_AS(regionA_characteristic(gp, 0.3, 0.1), GameError);   // not usable
    CHECK_THROWS_AS(regionA_characteristic(gp, 2.6, -0.1), GameError);  // negative tau
}

TEST_CASE("region B anchor point and early sign") {
    GameParams gp = kFig9;
    CharPoint p0 = regionB_characteristic(gp, -0.4, -1, 0.0);
    CHECK(p0.state.x == Approx(0.0).margin(1e-15));
    CHECK(p0.state.y == Approx(-0.4));
    CHECK(p0.controls.u_p == Approx(0.0).margin(1e-15));

    CharPoint p1 = regionB_characteristic(gp, -0.4, -1, 1e-3);
    CHECK(p1.state.x > 0.0);
    CharPoint p2 = regionB_characteristic(gp, -0.4, +1, 1e-3);
    CHECK(p2.state.x < 0.0);
    CHECK_THROWS_AS(regionB_characteristic(gp, -0.4, -1, -1.0), GameError);
}

TEST_CASE("region C anchor sits on the axis and re-enters x > 0") {
    GameParams gp = kFig9;
    auto cp = gamma_critical(gp);
    REQUIRE(cp.has_value());
    double y0 = 0.5 * (gp.v_e / gp.omega_e) * cp->y0_sharp;
    RegionCAnchor anchor = regionC_anchor(gp, y0);
    CHECK(anchor.y_cross > y0);  // backward time climbs the axis

    CharPoint p0 = regionC_characteristic(gp, y0, -1, 0.0);
    CHECK(p0.state.x == Approx(0.0).margin(1e-9));
    CHECK(p0.state.y == Approx(anchor.y_cross).margin(1e-9));
    CharPoint p1 = regionC_characteristic(gp, y0, -1, 1e-3);
    CHECK(p1.state.x > 0.0);

    CHECK_THROWS_AS(regionC_characteristic(kFig8, 0.1, -1, 0.1), GameError);  // v_r = 1/2
}

TEST_CASE("closed forms satisfy the backward state and adjoint equations") {
    struct Case {
        GameParams gp;
        Region region;
    };
    std::vector<Case> cases{{kFig8, Region::A}, {kFig8, Region::B},
                            {kFig9, Region::A}, {kFig9, Region::B}, {kFig9, Region::C}};
    for (const Case& c : cases) {
        auto arcs = sample_arcs(c.gp, c.region, 20);
        for (const ArcSpec& a : arcs) {
            double span = arc_validity_span(c.gp, a);
            REQUIRE(span > 1e-4);
            double worst_state = 0.0, worst_adj = 0.0, worst_h = 0.0, worst_col = 0.0;
            for (int k = 0; k < 100; ++k) {
                double tau = 1e-4 + (span - 2e-4) * k / 99.0;
                worst_state = std::max(worst_state, state_residual(c.gp, a, tau));
                worst_adj = std::max(worst_adj, adjoint_residual(c.gp, a, tau));
                CharPoint p = eval_arc(c.gp, a, tau);
                worst_h = std::max(
                    worst_h, std::abs(hamiltonian(c.gp, p.state, p.adjoint, p.controls)));
                worst_col = std::max(worst_col,
                                     std::abs(p.adjoint.px * std::cos(p.controls.u_p) -
                                              p.adjoint.py * std::sin(p.controls.u_p)));
            }
            CHECK(worst_state < 1e-6);
            CHECK(worst_adj < 1e-6);
            CHECK(worst_h < 1e-8);
            CHECK(worst_col < 1e-8);
        }
    }
}

TEST_CASE("sigma derivative identity along region A") {
    GameParams gp = kFig9;
    for (const ArcSpec& a : sample_arcs(gp, Region::A, 5)) {
        double span = arc_validity_span(gp, a);
        for (int k = 0; k < 50; ++k) {
            double tau = 1e-4 + (span - 2e-4) * k / 49.0;
            double h = 1e-5;
            CharPoint lo = eval_arc(gp, a, tau - h);
            CharPoint hi = eval_arc(gp, a, tau + h);
            CharPoint mid = eval_arc(gp, a, tau);
            double fd = (switch_sigma(hi.state, hi.adjoint) -
                         switch_sigma(lo.state, lo.adjoint)) /
                        (2 * h);
            // Backward-time derivative of sigma is +px v_e.
            CHECK(std::abs(fd - mid.adjoint.px * gp.v_e) < 1e-6);
        }
    }
}

TEST_CASE("switching sign matches the bang control on open validity") {
    for (const GameParams& gp : {kFig8, kFig9}) {
        for (const ArcSpec& a : sample_arcs(gp, Region::A, 10)) {
            double span = arc_validity_span(gp, a);
            for (int k = 1; k < 40; ++k) {
                double tau = span * k / 40.0;
                CharPoint p = eval_arc(gp, a, tau);
                double sigma = switch_sigma(p.state, p.adjoint);
                CHECK(sigma * p.controls.u_e > 0.0);
            }
        }
    }
}

TEST_CASE("region A meets region B at the axis seam") {
    GameParams gp = kFig9;
    double eps = 1e-5;
    for (double tau : {0.1, 0.5, 1.0}) {
        CharPoint a = regionA_characteristic(gp, kPi - eps, tau);
        CharPoint b = regionB_characteristic(gp, -gp.rho, -1, tau);
        CHECK((a.state - b.state).norm() < 20.0 * eps);
        CHECK(std::hypot(a.adjoint.px - b.adjoint.px, a.adjoint.py - b.adjoint.py) < 20.0 * eps);
        CHECK(std::abs(wrap_angle(a.controls.u_p - b.controls.u_p)) < 20.0 * eps);
        CHECK(a.controls.u_e == b.controls.u_e);
    }
}

TEST_CASE("mirror symmetry of the characteristic families") {
    GameParams gp = kFig9;
    for (double tau : {0.0, 0.3, 0.8}) {
        CharPoint a = regionA_characteristic(gp, 2.7, tau);
        CharPoint am = regionA_characteristic(gp, -2.7, tau);
        CHECK((mirror(a.state) - am.state).norm() < 1e-12);
        CHECK(am.controls.u_e == Approx(-a.controls.u_e));
        CHECK(std::abs(wrap_angle(am.controls.u_p + a.controls.u_p)) < 1e-12);

        CharPoint b = regionB_characteristic(gp, -0.5, -1, tau);
        CharPoint bm = regionB_characteristic(gp, -0.5, +1, tau);
        CHECK((mirror(b.state) - bm.state).norm() < 1e-12);
        CHECK(std::abs(wrap_angle(bm.controls.u_p + b.controls.u_p)) < 1e-12);
    }
}

TEST_CASE("backward monotone climb of the y coordinate") {
    // Forward-time descent at rate at least v_e - v_p, stated backward.
    for (const GameParams& gp : {kFig8, kFig9}) {
        for (Region region : {Region::A, Region::B}) {
            for (const ArcSpec& a : sample_arcs(gp, region, 6)) {
                double span = arc_validity_span(gp, a);
                double prev_y = eval_arc(gp, a, 0.0).state.y;
                for (int k = 1; k <= 30; ++k) {
                    double tau = span * k / 30.0;
                    double y = eval_arc(gp, a, tau).state.y;
                    CHECK(y - prev_y >= gp.closing_speed() * span / 30.0 - 1e-9);
                    prev_y = y;
                }
            }
        }
    }
}

TEST_CASE("gamma function anchors") {
    std::mt19937 rng(301);
    std::uniform_real_distribution<double> vr(0.05, 0.95);
    std::uniform_real_distribution<double> y0(0.0, 1.0);
    for (int k = 0; k < 200; ++k) {
        double v = vr(rng), y = y0(rng);
        CHECK(gamma(v, 0.0, y) == Approx(0.0).margin(1e-15));
        CHECK(gamma(v, kPi, y) == Approx(2.0).margin(1e-12));
    }
}

TEST_CASE("gamma sign structure decides the extra zero branch") {
    // v_r <= 1/2: nonnegative over the admissible box; v_r > 1/2: a negative
    // dip appears (the re-crossing branch).
    GameParams slow = kFig8;  // box height omega rho / v_e = 0.5
    double box_y = slow.omega_e * slow.rho / slow.v_e;
    double min_slow = 1e300;
    for (int i = 1; i <= 300; ++i)
        for (int j = 0; j <= 100; ++j)
            min_slow = std::min(min_slow, gamma(0.4, 2 * kPi * i / 300.0, box_y * j / 100.0));
    CHECK(min_slow > -1e-12);

    double min_fast = 1e300;
    double box_y9 = kFig9.omega_e * kFig9.rho / kFig9.v_e;
    for (int i = 1; i <= 300; ++i)
        for (int j = 0; j <= 100; ++j)
            min_fast = std::min(min_fast, gamma(2.0 / 3.0, 2 * kPi * i / 300.0,
                                                box_y9 * j / 100.0));
    CHECK(min_fast < -1e-3);
}

TEST_CASE("gamma critical point: absent at or below the half ratio") {
    for (double vr : {0.2, 0.4, 0.5}) {
        GameParams gp{1.0, vr, 1.0, 1.0};
        CHECK_FALSE(gamma_critical(gp).has_value());
    }
}

TEST_CASE("gamma critical point matches the tangency closed form") {
    // Test-only oracle: eliminating the zero/tangency pair analytically gives
    // tan(tau#/2) = sqrt(2 v_r - 1) and y0# = v_r tau# - tan(tau#/2).
    for (double vr : {0.55, 2.0 / 3.0, 0.9}) {
        GameParams gp{1.0, vr, 1.0, 1.0};
        auto cp = gamma_critical(gp);
        REQUIRE(cp.has_value());
        CHECK(std::abs(gamma(vr, cp->tau_sharp, cp->y0_sharp)) < 1e-10);
        CHECK(std::abs(gamma_dtau(vr, cp->tau_sharp, cp->y0_sharp)) < 1e-10);

        double t_ref = 2.0 * std::atan(std::sqrt(2.0 * vr - 1.0));
        double y_ref = vr * t_ref - std::sqrt(2.0 * vr - 1.0);
        CHECK(cp->tau_sharp == Approx(t_ref).margin(1e-9));
        CHECK(cp->y0_sharp == Approx(y_ref).margin(1e-9));
    }
}

TEST_CASE("crossing time roots and limits") {
    GameParams gp = kFig9;
    auto cp = gamma_critical(gp);
    REQUIRE(cp.has_value());
    double vr = gp.speed_ratio();

    for (int k = 1; k <= 20; ++k) {
        double y0t = cp->y0_sharp * k / 21.0;
        double t = crossing_time(gp, y0t);
        CHECK(t > 0.0);
        CHECK(t < cp->tau_sharp);
        CHECK(std::abs(gamma(vr, t, y0t)) < 1e-10);

        // Uniqueness scan: exactly one sign change before the tangency.
        int changes = 0;
        double prev = gamma(vr, 1e-9, y0t);
        for (int i = 1; i <= 400; ++i) {
            double tt = 1e-9 + (cp->tau_sharp - 2e-9) * i / 400.0;
            double g = gamma(vr, tt, y0t);
            if ((prev > 0 && g < 0) || (prev < 0 && g > 0)) ++changes;
            prev = g;
        }
        CHECK(changes == 1);
    }

    CHECK(crossing_time(gp, 1e-6) < 1e-2);
    CHECK(crossing_time(gp, cp->y0_sharp * (1.0 - 1e-7)) >
          cp->tau_sharp - 1e-2);
    CHECK_THROWS_AS(crossing_time(gp, cp->y0_sharp * 1.5), GameError);
    CHECK_THROWS_AS(crossing_time(kFig8, 0.1), GameError);
}

TEST_CASE("dispersal height interpolates the known regimes") {
    CHECK(dispersal_height(kFig8) == Approx(0.0).margin(1e-12));
    GameParams gp = kFig9;
    double cut = dispersal_height(gp);
    // Closed-form reference (v_e / omega) sqrt(2 v_r - 1).
    double ref = (gp.v_e / gp.omega_e) * std::sqrt(2.0 * gp.speed_ratio() - 1.0);
    CHECK(cut == Approx(ref).margin(1e-8));
}

TEST_CASE("evader feedback sets") {
    GameParams gp = kFig9;
    double cut = dispersal_height(gp);
    auto f1 = evader_feedback(gp, {0.3, 0.1}, cut);
    REQUIRE(f1.size() == 1);
    CHECK(f1[0] == -1.0);
    auto f2 = evader_feedback(gp, {-0.2, 0.5}, cut);
    REQUIRE(f2.size() == 1);
    CHECK(f2[0] == 1.0);
    auto f3 = evader_feedback(gp, {0.0, -0.4}, cut);
    REQUIRE(f3.size() == 1);
    CHECK(f3[0] == 0.0);
    auto f4 = evader_feedback(gp, {0.0, 0.5 * cut}, cut);
    REQUIRE(f4.size() == 1);
    CHECK(f4[0] == 0.0);
    auto f5 = evader_feedback(gp, {0.0, 0.95}, cut);  // above the cut: either turn
    REQUIRE(f5.size() == 2);
    CHECK_THROWS_AS(evader_feedback(gp, {0.0, 0.0}, cut), GameError);

    // v_r <= 1/2: the whole upper axis disperses.
    auto g1 = evader_feedback(kFig8, {0.0, 0.2}, std::nullopt);
    CHECK(g1.size() == 2);
}
