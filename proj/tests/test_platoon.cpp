#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>

#include "platoonsim/platoon.hpp"
#include "platoonsim/rng.hpp"

using namespace platoonsim;

namespace {

// PLEXE form with spacing error eps = x_ego - x_pred + l_pred + gap_des
double cacc_oracle(double x_ego, double v_ego, double x_pred, double v_pred, double a_pred, double v_lead,
                   double a_lead, double len, const PlatoonConfig& c, const VehicleParams& p) {
    const double eps = x_ego - x_pred + len + c.gap_des;
    const double eps_dot = v_ego - v_pred;
    const double r = c.xi + std::sqrt(c.xi * c.xi - 1);
    const double a1 = 1 - c.c1, a2 = c.c1;
    const double a3 = -(2 * c.xi - c.c1 * r) * c.omega_n;
    const double a4 = -c.xi * c.omega_n * c.c1 - std::sqrt(c.xi * c.xi - 1) * c.omega_n * c.c1;
    const double a5 = -c.omega_n * c.omega_n;
    const double u = a1 * a_pred + a2 * a_lead + a3 * eps_dot + a4 * (v_ego - v_lead) + a5 * eps;
    return std::clamp(u, -p.b_emergency, p.a_max);
}

PlatoonConfig half_c1() {
    PlatoonConfig c;
    c.c1 = 0.5;
    return c;
}

VehicleState at(double s, double v) { return VehicleState{"x", s, v, 0, {}, 0}; }
Beacon beacon(double s, double v, double a) { return Beacon{0, s, v, a, 0, 0}; }

}  // namespace

TEST_CASE("equilibrium gives zero control") {
    PlatoonConfig c;
    VehicleParams p;
    const double pred_s = 100 + p.length + c.gap_des;
    CHECK(cacc_accel(at(100, 15), beacon(pred_s, 15, 0), beacon(200, 15, 0), c, p.length, p) == doctest::Approx(0.0));
}

TEST_CASE("one metre of extra gap pulls at omega_n squared") {
    auto c = half_c1();
    VehicleParams p;
    const double pred_s = 100 + p.length + c.gap_des + 1;
    CHECK(cacc_accel(at(100, 15), beacon(pred_s, 15, 0), beacon(200, 15, 0), c, p.length, p) ==
          doctest::Approx(0.04).epsilon(1e-12));
}

TEST_CASE("relative speed terms") {
    auto c = half_c1();
    VehicleParams p;
    const double pred_s = 100 + p.length + c.gap_des;
    CHECK(cacc_accel(at(100, 14), beacon(pred_s, 15, 0), beacon(200, 15, 0), c, p.length, p) ==
          doctest::Approx(0.4).epsilon(1e-12));
}

TEST_CASE("cacc matches the PLEXE-form oracle") {
    VehicleParams p;
    Lcg64 rng(31);
    for (int i = 0; i < 40; ++i) {
        PlatoonConfig c;
        c.c1 = 0.1 + 0.8 * uniform01(rng);
        c.xi = 1 + uniform01(rng);
        c.omega_n = 0.05 + uniform01(rng) * 0.5;
        c.gap_des = 2 + uniform01(rng) * 10;
        const double x = uniform01(rng) * 1000, v = uniform01(rng) * 20;
        const double xp = x + p.length + c.gap_des + (uniform01(rng) - 0.5) * 6;
        const double vp = v + (uniform01(rng) - 0.5) * 4, ap = (uniform01(rng) - 0.5) * 3;
        const double vl = v + (uniform01(rng) - 0.5) * 4, al = (uniform01(rng) - 0.5) * 3;
        const double expect = cacc_oracle(x, v, xp, vp, ap, vl, al, p.length, c, p);
        const double got = cacc_accel(at(x, v), beacon(xp, vp, ap), beacon(xp + 50, vl, al), c, p.length, p);
        CHECK(got == doctest::Approx(expect).epsilon(1e-9).scale(1.0));
    }
}

TEST_CASE("cacc output is clamped") {
    PlatoonConfig c;
    VehicleParams p;
    CHECK(cacc_accel(at(0, 0), beacon(500, 20, 5), beacon(600, 20, 5), c, p.length, p) == p.a_max);
    CHECK(cacc_accel(at(0, 20), beacon(p.length, 0, -9), beacon(50, 0, -9), c, p.length, p) == -p.b_emergency);
}

TEST_CASE("engagement threshold") {
    PlatoonConfig c;
    CHECK(cacc_engages(9.9, c));
    CHECK(cacc_engages(-9.9, c));
    CHECK_FALSE(cacc_engages(10.0, c));
}

TEST_CASE("leader speed target") {
    PlatoonConfig c;
    c.osc_amp = 0;
    for (double t : {0.0, 1.0, 3.3, 100.0}) CHECK(leader_speed(t, c, 30) == 19.8);
    c = PlatoonConfig{};
    CHECK(leader_speed(1.25, c, 30) == doctest::Approx(20.0));
    CHECK(leader_speed(1.25, c, 15) == 15);
    CHECK(leader_speed(2.5, c, 30) == doctest::Approx(19.8));
}

TEST_CASE("leader acceleration feeds forward the oscillation slope") {
    PlatoonConfig c;
    VehicleParams p;
    const double t = 0.0;
    auto st = at(0, leader_speed(t, c, 30));
    const double slope = c.osc_amp * 2 * std::numbers::pi * c.osc_freq;
    CHECK(leader_accel(st, t, c, p, 30) == doctest::Approx(slope));
    st.v = 0;
    CHECK(leader_accel(st, t, c, p, 30) == doctest::Approx(c.leader_accel_frac * p.a_max));
}

TEST_CASE("form_platoon roles") {
    PlatoonConfig c;
    std::vector<VehicleState> v{at(30, 0), at(20, 0), at(10, 0)};
    auto roles = form_platoon(v, c);
    REQUIRE(roles.size() == 3);
    CHECK(roles[0].kind == RoleKind::Leader);
    CHECK(roles[1].kind == RoleKind::Follower);
    CHECK(roles[1].index == 1);
    CHECK(roles[2].kind == RoleKind::Follower);
    CHECK(roles[2].index == 2);

    c.platoon_size = 1;
    for (const auto& r : form_platoon(v, c)) CHECK(r.kind == RoleKind::Leader);

    c.platoon_size = 3;
    std::vector<VehicleState> five{at(50, 0), at(40, 0), at(30, 0), at(20, 0), at(10, 0)};
    auto r5 = form_platoon(five, c);
    CHECK(r5[3].kind == RoleKind::Leader);
    CHECK(r5[3].platoon == 1);
    CHECK(r5[4].kind == RoleKind::Follower);
    CHECK(r5[4].platoon == 1);

    std::vector<VehicleState> unordered{at(10, 0), at(20, 0)};
    CHECK_THROWS_AS(form_platoon(unordered, c), std::invalid_argument);
}

TEST_CASE("platoon config validation") {
    PlatoonConfig c;
    CHECK_NOTHROW(c.validate());
    c.c1 = 1.0;
    CHECK_THROWS_AS(c.validate(), std::invalid_argument);
    c = PlatoonConfig{};
    c.xi = 0.5;
    CHECK_THROWS_AS(c.validate(), std::invalid_argument);
}

TEST_CASE("property: linearised string of followers does not amplify a 0.2 Hz oscillation") {
    // kinematic string driven by the exact CACC law, no saturation
    PlatoonConfig c;
    VehicleParams p;
    p.a_max = 100;
    p.b_emergency = 100;
    const double dt = 0.01;
    const int n = 4;
    std::vector<double> x(n), v(n, c.v_cruise), a(n, 0);
    for (int i = 0; i < n; ++i) x[i] = -i * (p.length + c.gap_des);
    std::vector<double> vmin(n, 1e9), vmax(n, -1e9);
    const double w = 2 * std::numbers::pi * c.osc_freq;
    for (int k = 0; k < 30000; ++k) {
        const double t = k * dt;
        std::vector<double> u(n);
        u[0] = c.osc_amp * w * std::cos(w * t);
        for (int i = 1; i < n; ++i)
            u[i] = cacc_accel(at(x[i], v[i]), beacon(x[i - 1], v[i - 1], a[i - 1]), beacon(x[0], v[0], a[0]), c,
                              p.length, p);
        for (int i = 0; i < n; ++i) {
            a[i] = u[i];
            v[i] += u[i] * dt;
            x[i] += v[i] * dt;
            if (t > 100) {
                vmin[i] = std::min(vmin[i], v[i]);
                vmax[i] = std::max(vmax[i], v[i]);
            }
        }
    }
    for (int i = 2; i < n; ++i) CHECK(vmax[i] - vmin[i] <= vmax[i - 1] - vmin[i - 1] + 1e-9);
}
