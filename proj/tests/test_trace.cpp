#include <doctest.h>

#include <cmath>
#include <numbers>
#include <sstream>
#include <string>

#include <fmt/format.h>

#include "platoonsim/rng.hpp"
#include "platoonsim/trace.hpp"

using namespace platoonsim;

namespace {

const char* kRow = "T:Monday, Y:2020 M:06 D:15, H:11 M:02 S:07, 48.3069 n, 14.2858 e, 266, 54.0, 182.5, -";

std::string canonical_row(int sec, double lat, double lon, double heading = 90.0) {
    const int m = sec / 60, s = sec % 60;
    return fmt::format("Monday,2020-06-15,11:{:02}:{:02},{},n,{},e,266,36.0,{},-\n", m, s, lat, lon, heading);
}

// steps east at ~10 m per second, seconds listed explicitly
TripTrace straight_trace(const std::vector<int>& secs) {
    TripTrace t;
    const double dlon = 10.0 / (kEarthRadiusM * std::cos(48.3 * std::numbers::pi / 180.0)) * 180.0 / std::numbers::pi;
    for (int sec : secs) {
        TraceRow r;
        r.day = "Monday";
        r.year = 2020;
        r.month = 6;
        r.mday = 15;
        r.hour = 11;
        r.minute = sec / 60;
        r.second = sec % 60;
        r.lat = 48.3;
        r.lon = 14.28 + dlon * sec;
        r.speed_kmh = 36;
        r.heading_deg = 90;
        t.rows.push_back(r);
    }
    return t;
}

std::vector<int> seq(int n) {
    std::vector<int> v;
    for (int i = 0; i < n; ++i) v.push_back(i);
    return v;
}

}  // namespace

TEST_CASE("tagged compact row parses with hemisphere letters") {
    std::istringstream in(kRow);
    auto res = parse_trace(in);
    REQUIRE(res.errors.empty());
    REQUIRE(res.trace.rows.size() == 1);
    const auto& r = res.trace.rows[0];
    CHECK(r.day == "Monday");
    CHECK(r.year == 2020);
    CHECK(r.month == 6);
    CHECK(r.mday == 15);
    CHECK(r.hour == 11);
    CHECK(r.minute == 2);
    CHECK(r.second == 7);
    CHECK(r.lat == doctest::Approx(48.3069));
    CHECK(r.lon == doctest::Approx(14.2858));
    CHECK(r.height_m == 266);
    CHECK(r.speed_kmh == 54.0);
    CHECK(r.heading_deg == 182.5);
}

TEST_CASE("southern hemisphere folds into the sign") {
    std::string row = kRow;
    row.replace(row.find("48.3069 n"), 9, "48.3069 s");
    std::istringstream in(row);
    auto res = parse_trace(in);
    REQUIRE(res.trace.rows.size() == 1);
    CHECK(res.trace.rows[0].lat == doctest::Approx(-48.3069));
}

TEST_CASE("heading out of range is reported and the row dropped") {
    std::string text = "day,date,time,lat,lat_hem,lon,lon_hem,height_m,speed_kmh,heading_deg,vox\n";
    text += canonical_row(0, 48.3, 14.28);
    text += canonical_row(1, 48.3, 14.2801);
    text += canonical_row(2, 48.3, 14.2802, 400.0);
    text += canonical_row(3, 48.3, 14.2803);
    std::istringstream in(text);
    auto res = parse_trace(in);
    CHECK(res.trace.rows.size() == 3);
    REQUIRE(res.errors.size() == 1);
    CHECK(res.errors[0].field == "heading_deg");
    CHECK(res.errors[0].line == 4);
}

TEST_CASE("empty input and all-rejected input throw EmptyTrace") {
    std::istringstream empty("");
    CHECK_THROWS_AS(parse_trace(empty), EmptyTrace);
    std::istringstream bad("day,date,time,lat,lat_hem,lon,lon_hem,height_m,speed_kmh,heading_deg,vox\n"
                           "Monday,2020-06-15,11:00:00,95.0,n,14.2,e,266,10,10,-\n");
    CHECK_THROWS_AS(parse_trace(bad), EmptyTrace);
}

TEST_CASE("unparseable mandatory field names the field") {
    std::string text = canonical_row(0, 48.3, 14.28);
    text += "Monday,2020-06-15,11:00:01,abc,n,14.28,e,266,36,90,-\n";
    std::istringstream in(text);
    auto res = parse_trace(in);
    REQUIRE(res.errors.size() == 1);
    CHECK(res.errors[0].field == "lat");
    CHECK(res.errors[0].line == 2);
}

TEST_CASE("header maps columns by name") {
    auto s = TraceSchema::from_header("time,date,day,lon,lon_hem,lat,lat_hem,speed_kmh,height_m,heading_deg,vox");
    CHECK(s.time == 0);
    CHECK(s.lon == 3);
    CHECK(s.lat == 5);
    CHECK(s.speed == 7);
    CHECK_THROWS_AS(TraceSchema::from_header("day,date,time"), std::invalid_argument);
}

TEST_CASE("haversine examples") {
    CHECK(haversine_m({48.3, 14.28}, {48.3, 14.28}) == 0.0);
    const double equator = 2 * std::numbers::pi * kEarthRadiusM / 360.0;
    CHECK(haversine_m({0, 0}, {0, 1}) == doctest::Approx(equator).epsilon(1e-9));
    CHECK(std::abs(haversine_m({0, 0}, {0, 1}) - 111194.9) < 1.0);
    CHECK(std::abs(haversine_m({48.30, 14.28}, {48.31, 14.28}) - 1111.9) < 1.0);
    CHECK(haversine_m({48.30, 14.28}, {48.31, 14.28}) == doctest::Approx(equator * 0.01).epsilon(1e-9));
}

TEST_CASE("clean_trace drops a 500 m teleport") {
    auto t = straight_trace(seq(10));
    t.rows[5].lat += 500.0 / kEarthRadiusM * 180.0 / std::numbers::pi;
    auto c = clean_trace(t, 60.0);
    REQUIRE(c.rows.size() == 9);
    for (const auto& r : c.rows) CHECK(r.minute * 60 + r.second != 5);
}

TEST_CASE("clean_trace is the identity on a glitch-free trace") {
    auto t = straight_trace(seq(20));
    auto c = clean_trace(t, 60.0);
    REQUIRE(c.rows.size() == t.rows.size());
    for (std::size_t i = 0; i < t.rows.size(); ++i) {
        CHECK(c.rows[i].lat == t.rows[i].lat);
        CHECK(c.rows[i].lon == t.rows[i].lon);
    }
    CHECK(c.gaps.empty());
}

TEST_CASE("clean_trace records a 10 s gap at its index pair") {
    std::vector<int> secs{0, 1, 2, 3, 13, 14, 15};
    auto c = clean_trace(straight_trace(secs), 60.0);
    REQUIRE(c.gaps.size() == 1);
    CHECK(c.gaps[0].first == 3);
    CHECK(c.gaps[0].second == 4);
}

TEST_CASE("clean_trace drops a glitched first row") {
    auto t = straight_trace(seq(6));
    t.rows[0].lat += 0.01;
    auto c = clean_trace(t, 60.0);
    CHECK(c.rows.size() == 5);
    CHECK(c.rows[0].second == 1);
}

TEST_CASE("property: parse, serialize, parse is idempotent") {
    Lcg64 rng(2024);
    for (int trial = 0; trial < 50; ++trial) {
        std::string text;
        const int n = 1 + static_cast<int>(uniform01(rng) * 30);
        for (int i = 0; i < n; ++i) {
            const double lat = -89.0 + 178.0 * uniform01(rng);
            const double lon = -179.0 + 358.0 * uniform01(rng);
            const char ns = lat < 0 ? 's' : 'n';
            const char ew = lon < 0 ? 'w' : 'e';
            text += fmt::format("Tuesday,2020-06-16,{:02}:{:02}:{:02},{},{},{},{},{},{},{},vox{}\n", 8 + i / 3600,
                                (i / 60) % 60, i % 60, std::abs(lat), ns, std::abs(lon), ew,
                                std::round(uniform01(rng) * 500), uniform01(rng) * 120, uniform01(rng) * 359.9, i);
        }
        std::istringstream in1(text);
        auto a = parse_trace(in1).trace;
        std::ostringstream out1;
        write_trace(out1, a);
        std::istringstream in2(out1.str());
        auto b = parse_trace(in2).trace;
        std::ostringstream out2;
        write_trace(out2, b);
        CHECK(out1.str() == out2.str());
        REQUIRE(a.rows.size() == b.rows.size());
        for (std::size_t i = 0; i < a.rows.size(); ++i) {
            CHECK(a.rows[i].lat == b.rows[i].lat);
            CHECK(a.rows[i].lon == b.rows[i].lon);
            CHECK(a.rows[i].speed_kmh == b.rows[i].speed_kmh);
            CHECK(a.rows[i].heading_deg == b.rows[i].heading_deg);
            CHECK(a.rows[i].vox == b.rows[i].vox);
        }
    }
}

TEST_CASE("property: clean_trace output is a subsequence of its input") {
    Lcg64 rng(99);
    for (int trial = 0; trial < 100; ++trial) {
        auto t = straight_trace(seq(40));
        for (auto& r : t.rows)
            if (uniform01(rng) < 0.15) r.lon += (uniform01(rng) - 0.5) * 0.05;
        TripTrace c;
        try {
            c = clean_trace(t, 60.0);
        } catch (const EmptyTrace&) {
            continue;
        }
        std::size_t j = 0;
        for (const auto& r : c.rows) {
            while (j < t.rows.size() && !(t.rows[j].lon == r.lon && t.rows[j].second == r.second &&
                                          t.rows[j].minute == r.minute))
                ++j;
            CHECK(j < t.rows.size());
            ++j;
        }
        for (std::size_t i = 1; i < c.rows.size(); ++i) {
            const double dt = std::max<long long>(1, c.rows[i].epoch_s() - c.rows[i - 1].epoch_s());
            CHECK(haversine_m(c.rows[i - 1].pos(), c.rows[i].pos()) <= 60.0 * dt);
        }
    }
}

TEST_CASE("clean_trace is deterministic") {
    auto t = straight_trace(seq(30));
    t.rows[7].lon += 0.02;
    auto a = clean_trace(t);
    auto b = clean_trace(t);
    std::ostringstream oa, ob;
    write_trace(oa, a);
    write_trace(ob, b);
    CHECK(oa.str() == ob.str());
}
