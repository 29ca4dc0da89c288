#include "platoonsim/road.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <numbers>
#include <ostream>
#include <sstream>

#include <boost/geometry.hpp>
#include <boost/geometry/geometries/linestring.hpp>
#include <boost/geometry/geometries/point_xy.hpp>
#include <fmt/format.h>

namespace platoonsim {

namespace {

using XY = boost::geometry::model::d2::point_xy<double>;
using Line = boost::geometry::model::linestring<XY>;

// equirectangular projection about the first point, metres
Line project(const std::vector<TraceRow>& rows) {
    constexpr double deg = std::numbers::pi / 180.0;
    const double lat0 = rows.front().lat * deg;
    const double lon0 = rows.front().lon * deg;
    Line line;
    for (const auto& r : rows)
        line.emplace_back(kEarthRadiusM * (r.lon * deg - lon0) * std::cos(lat0), kEarthRadiusM * (r.lat * deg - lat0));
    return line;
}

}  // namespace

double derived_limit_mps(std::vector<double> speeds_kmh) {
    if (speeds_kmh.empty()) return 5.0 / 3.6;
    std::sort(speeds_kmh.begin(), speeds_kmh.end());
    const auto n = speeds_kmh.size();
    const auto rank = static_cast<std::size_t>(std::ceil(0.95 * static_cast<double>(n)));
    const double p95 = speeds_kmh[std::max<std::size_t>(rank, 1) - 1];
    const double kmh = std::max(5.0, std::ceil(p95 / 5.0 - 1e-9) * 5.0);
    return kmh / 3.6;
}

Route route_from_trace(const TripTrace& trace, double epsilon_m) {
    const auto& rows = trace.rows;
    if (rows.size() < 2) throw RouteTooShort(0.0);

    std::vector<double> arc(rows.size(), 0.0);
    for (std::size_t i = 1; i < rows.size(); ++i) arc[i] = arc[i - 1] + haversine_m(rows[i - 1].pos(), rows[i].pos());
    if (arc.back() < 100.0) throw RouteTooShort(arc.back());

    const Line full = project(rows);
    Line simple;
    boost::geometry::simplify(full, simple, epsilon_m);

    // simplify keeps a subsequence of the input; recover indices in order
    std::vector<std::size_t> keep;
    std::size_t j = 0;
    for (const auto& p : simple) {
        while (j < full.size() && !(full[j].x() == p.x() && full[j].y() == p.y())) ++j;
        if (j == full.size()) break;
        keep.push_back(j++);
    }
    if (keep.empty() || keep.front() != 0) keep.insert(keep.begin(), 0);
    if (keep.back() != rows.size() - 1) keep.push_back(rows.size() - 1);

    Route route;
    for (auto k : keep) {
        // duplicate fixes (vehicle standing) collapse to one point
        if (!route.cum_dist.empty() && arc[k] <= route.cum_dist.back()) continue;
        route.points.push_back({rows[k].lat, rows[k].lon, rows[k].height_m});
        route.cum_dist.push_back(arc[k]);
    }
    route.length_m = route.cum_dist.back();

    std::vector<std::size_t> kept_idx;
    for (auto k : keep)
        if (kept_idx.empty() || arc[k] > arc[kept_idx.back()]) kept_idx.push_back(k);

    for (std::size_t leg = 0; leg + 1 < kept_idx.size(); ++leg) {
        const std::size_t a = kept_idx[leg];
        const std::size_t b = kept_idx[leg + 1];
        const std::size_t end = (leg + 2 == kept_idx.size()) ? b + 1 : b;
        std::vector<double> speeds;
        for (std::size_t i = a; i < end; ++i) speeds.push_back(rows[i].speed_kmh);
        const double lim = derived_limit_mps(speeds);
        const double s0 = route.cum_dist[leg];
        const double s1 = route.cum_dist[leg + 1];
        if (!route.segments.empty() && route.segments.back().limit_mps == lim)
            route.segments.back().end_m = s1;
        else
            route.segments.push_back({s0, s1, lim});
    }
    route.segments.back().end_m = route.length_m;
    route.stops.push_back({"cs1", 0.0, 0.0});
    route.stops.push_back({"cs2", route.length_m, 0.0});
    return route;
}

double limit_at(const Route& route, double s) {
    if (!(s >= 0.0) || s > route.length_m || route.segments.empty()) throw OutOfRoute(s);
    auto it = std::upper_bound(route.segments.begin(), route.segments.end(), s,
                               [](double x, const Segment& seg) { return x < seg.end_m; });
    if (it == route.segments.end()) return route.segments.back().limit_mps;
    return it->limit_mps;
}

bool signal_is_green(const SignalHead& sig, double t) {
    double phase = std::fmod(t + sig.offset_s, sig.cycle_s);
    if (phase < 0.0) phase += sig.cycle_s;
    return phase < sig.green_s;
}

Route read_route(std::istream& in) {
    Route r;
    bool have_length = false;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        std::istringstream ls(line);
        std::string kw;
        if (!(ls >> kw)) continue;
        auto finish = [&]() {
            std::string extra;
            if (ls.fail()) throw RouteFormatError(lineno, "malformed '" + kw + "' record");
            if (ls >> extra) throw RouteFormatError(lineno, "trailing field '" + extra + "'");
        };
        if (kw == "length_m") {
            ls >> r.length_m;
            finish();
            have_length = true;
        } else if (kw == "segment") {
            Segment s;
            ls >> s.start_m >> s.end_m >> s.limit_mps;
            finish();
            if (!(s.limit_mps > 0.0)) throw RouteFormatError(lineno, "speed limit must be > 0");
            if (!(s.end_m > s.start_m)) throw RouteFormatError(lineno, "segment end must exceed start");
            r.segments.push_back(s);
        } else if (kw == "stop") {
            ContainerStop s;
            ls >> s.id >> s.position_m >> s.dwell_s;
            finish();
            if (s.dwell_s < 0.0) throw RouteFormatError(lineno, "negative dwell");
            r.stops.push_back(s);
        } else if (kw == "signal") {
            SignalHead s;
            ls >> s.position_m >> s.cycle_s >> s.green_s >> s.offset_s;
            finish();
            if (!(s.green_s > 0.0 && s.green_s <= s.cycle_s)) throw RouteFormatError(lineno, "need 0 < green <= cycle");
            r.signals.push_back(s);
        } else {
            throw RouteFormatError(lineno, "unknown record '" + kw + "'");
        }
    }
    if (!have_length || !(r.length_m > 0.0)) throw RouteFormatError(lineno, "missing or non-positive length_m");
    if (r.segments.empty()) throw RouteFormatError(lineno, "no segments");
    std::sort(r.segments.begin(), r.segments.end(), [](auto& a, auto& b) { return a.start_m < b.start_m; });
    double cursor = 0.0;
    for (const auto& s : r.segments) {
        if (s.start_m != cursor) throw RouteFormatError(lineno, "segments do not tile the route at " + std::to_string(cursor));
        cursor = s.end_m;
    }
    if (cursor != r.length_m) throw RouteFormatError(lineno, "segments end before length_m");
    for (const auto& s : r.stops)
        if (s.position_m < 0.0 || s.position_m > r.length_m) throw RouteFormatError(lineno, "stop " + s.id + " off route");
    for (const auto& s : r.signals)
        if (s.position_m < 0.0 || s.position_m > r.length_m) throw RouteFormatError(lineno, "signal off route");
    std::stable_sort(r.stops.begin(), r.stops.end(), [](auto& a, auto& b) { return a.position_m < b.position_m; });
    std::stable_sort(r.signals.begin(), r.signals.end(), [](auto& a, auto& b) { return a.position_m < b.position_m; });
    r.cum_dist = {0.0, r.length_m};
    r.points.resize(2);
    return r;
}

void write_route(std::ostream& out, const Route& route) {
    out << fmt::format("length_m {}\n", route.length_m);
    for (const auto& s : route.segments) out << fmt::format("segment {} {} {}\n", s.start_m, s.end_m, s.limit_mps);
    for (const auto& s : route.stops) out << fmt::format("stop {} {} {}\n", s.id, s.position_m, s.dwell_s);
    for (const auto& s : route.signals)
        out << fmt::format("signal {} {} {} {}\n", s.position_m, s.cycle_s, s.green_s, s.offset_s);
}

}  // namespace platoonsim
