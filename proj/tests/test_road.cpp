#include <doctest.h>

#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

#include "platoonsim/rng.hpp"
#include "platoonsim/road.hpp"

using namespace platoonsim;

namespace {

TraceRow row_at(int sec, double lat, double lon, double kmh) {
    TraceRow r;
    r.day = "Monday";
    r.year = 2020;
    r.month = 6;
    r.mday = 15;
    r.hour = 11 + sec / 3600;
    r.minute = (sec / 60) % 60;
    r.second = sec % 60;
    r.lat = lat;
    r.lon = lon;
    r.speed_kmh = kmh;
    return r;
}

double deg_per_m_lon(double lat) {
    return 180.0 / std::numbers::pi / (kEarthRadiusM * std::cos(lat * std::numbers::pi / 180.0));
}

Route two_segment() {
    Route r;
    r.length_m = 14000;
    r.segments = {{0, 7000, 13.9}, {7000, 14000, 19.4}};
    return r;
}

}  // namespace

TEST_CASE("three collinear points simplify to two") {
    TripTrace t;
    const double d = 500.0 * deg_per_m_lon(48.3);
    for (int i = 0; i < 3; ++i) t.rows.push_back(row_at(i, 48.3, 14.28 + d * i, 50));
    auto r = route_from_trace(t, 5.0);
    CHECK(r.points.size() == 2);
    const double legs = haversine_m(t.rows[0].pos(), t.rows[1].pos()) + haversine_m(t.rows[1].pos(), t.rows[2].pos());
    CHECK(r.length_m == doctest::Approx(legs).epsilon(1e-12));
}

TEST_CASE("straight kilometre at 54 km/h gives one 55 km/h segment") {
    TripTrace t;
    const double step = 15.0 * deg_per_m_lon(48.3);
    for (int i = 0; i <= 67; ++i) t.rows.push_back(row_at(i, 48.3, 14.28 + step * i, 54.0));
    auto r = route_from_trace(t, 5.0);
    CHECK(r.length_m > 1000.0);
    REQUIRE(r.segments.size() == 1);
    CHECK(r.segments[0].limit_mps == doctest::Approx(55.0 / 3.6).epsilon(1e-12));
    CHECK(r.segments[0].limit_mps == doctest::Approx(15.28).epsilon(1e-3));
    CHECK(r.stops.size() == 2);
    CHECK(r.stops.back().position_m == r.length_m);
}

TEST_CASE("short trace is rejected") {
    TripTrace t;
    for (int i = 0; i < 5; ++i) t.rows.push_back(row_at(i, 48.3, 14.28 + 10 * i * deg_per_m_lon(48.3), 30));
    CHECK_THROWS_AS(route_from_trace(t, 5.0), RouteTooShort);
}

TEST_CASE("bundled reference trace is about 14 km") {
    std::ifstream in(std::string(PLATOONSIM_DATA_DIR) + "/reference.trip.csv");
    REQUIRE(in);
    auto trace = clean_trace(parse_trace(in).trace, 60.0);
    auto r = route_from_trace(trace, 5.0);
    CHECK(std::abs(r.length_m - 14000.0) <= 500.0);
}

TEST_CASE("derived limit uses nearest-rank p95 rounded up to 5 km/h") {
    std::vector<double> v;
    for (int i = 1; i <= 100; ++i) v.push_back(i * 0.5);  // p95 = 47.5
    CHECK(derived_limit_mps(v) == doctest::Approx(50.0 / 3.6));
    CHECK(derived_limit_mps({50.0}) == doctest::Approx(50.0 / 3.6));
    CHECK(derived_limit_mps({0.0, 0.0}) == doctest::Approx(5.0 / 3.6));
}

TEST_CASE("limit_at boundaries") {
    auto r = two_segment();
    CHECK(limit_at(r, 0) == 13.9);
    CHECK(limit_at(r, 14000) == 19.4);
    CHECK(limit_at(r, 7000) == 19.4);
    CHECK(limit_at(r, 6999.999) == 13.9);
    CHECK_THROWS_AS(limit_at(r, -1), OutOfRoute);
    CHECK_THROWS_AS(limit_at(r, 14000.5), OutOfRoute);
}

TEST_CASE("signal phases") {
    SignalHead s{0, 60, 30, 0};
    CHECK(signal_is_green(s, 10));
    CHECK_FALSE(signal_is_green(s, 45));
    CHECK(signal_is_green(s, 60));
    SignalHead shifted{0, 60, 30, 40};
    CHECK_FALSE(signal_is_green(shifted, 0));
    CHECK(signal_is_green(shifted, 20));
}

TEST_CASE("route file round trip") {
    Route r = two_segment();
    r.stops = {{"cs1", 50, 0}, {"cs2", 13950, 30}};
    r.signals = {{1000, 90, 40, 12.5}, {5000, 80, 30, 0}};
    std::ostringstream out;
    write_route(out, r);
    std::istringstream in(out.str());
    auto back = read_route(in);
    CHECK(back.length_m == r.length_m);
    REQUIRE(back.segments.size() == 2);
    CHECK(back.segments[1].limit_mps == 19.4);
    REQUIRE(back.stops.size() == 2);
    CHECK(back.stops[1].dwell_s == 30);
    REQUIRE(back.signals.size() == 2);
    CHECK(back.signals[0].offset_s == 12.5);
    std::ostringstream again;
    write_route(again, back);
    CHECK(again.str() == out.str());
}

TEST_CASE("malformed route files") {
    auto bad = [](const char* text) {
        std::istringstream in(text);
        CHECK_THROWS_AS(read_route(in), RouteFormatError);
    };
    bad("length_m 100\nsegment 0 50 10\n");                  // does not tile
    bad("length_m 100\nsegment 0 100 0\n");                  // zero limit
    bad("length_m 100\nsegment 0 100 10\nsignal 5 60 70 0\n");  // green > cycle
    bad("length_m 100\nsegment 0 100 10\nstop a 5 -1\n");   // negative dwell
    bad("length_m 100\nsegment 0 100 10 7\n");               // trailing field
}

TEST_CASE("property: limit_at agrees with a linear scan") {
    Lcg64 rng(5);
    for (int trial = 0; trial < 50; ++trial) {
        Route r;
        double s = 0;
        const int n = 1 + static_cast<int>(uniform01(rng) * 8);
        for (int i = 0; i < n; ++i) {
            const double len = 50 + uniform01(rng) * 2000;
            r.segments.push_back({s, s + len, 5 + uniform01(rng) * 20});
            s += len;
        }
        r.length_m = s;
        for (int k = 0; k < 100; ++k) {
            const double x = uniform01(rng) * r.length_m;
            double expect = r.segments.back().limit_mps;
            for (const auto& seg : r.segments)
                if (x >= seg.start_m && x < seg.end_m) {
                    expect = seg.limit_mps;
                    break;
                }
            CHECK(limit_at(r, x) == expect);
        }
    }
}
