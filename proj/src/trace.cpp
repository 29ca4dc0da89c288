#include "platoonsim/trace.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <chrono>
#include <cmath>
#include <istream>
#include <numbers>
#include <optional>
#include <ostream>

#include <boost/algorithm/string.hpp>
#include <fmt/format.h>

namespace platoonsim {

namespace {

std::string trim(std::string_view s) {
    std::string out(s);
    boost::algorithm::trim(out);
    return out;
}

std::vector<std::string> split(const std::string& line, char delim) {
    std::vector<std::string> out;
    boost::algorithm::split(out, line, [delim](char c) { return c == delim; });
    for (auto& f : out) f = trim(f);
    return out;
}

std::optional<double> to_double(std::string_view s) {
    if (!s.empty() && s.front() == '+') s.remove_prefix(1);
    double v = 0.0;
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || p != s.data() + s.size() || !std::isfinite(v)) return std::nullopt;
    return v;
}

// every run of digits in s, in order ("Y:2020 M:06 D:15" -> 2020 6 15)
std::vector<int> integers_in(std::string_view s) {
    std::vector<int> out;
    std::size_t i = 0;
    while (i < s.size()) {
        if (!std::isdigit(static_cast<unsigned char>(s[i]))) {
            ++i;
            continue;
        }
        int v = 0;
        auto [p, ec] = std::from_chars(s.data() + i, s.data() + s.size(), v);
        if (ec != std::errc()) return {};
        out.push_back(v);
        i = static_cast<std::size_t>(p - s.data());
    }
    return out;
}

// "48.3069 n", "-48.3069", "48.3069" + separate hemisphere letter
std::optional<double> coordinate(std::string field, const std::string& hem_field, char pos, char neg) {
    char hem = 0;
    if (!field.empty() && std::isalpha(static_cast<unsigned char>(field.back()))) {
        hem = static_cast<char>(std::tolower(static_cast<unsigned char>(field.back())));
        field = trim(std::string_view(field).substr(0, field.size() - 1));
    } else if (!hem_field.empty()) {
        if (hem_field.size() != 1) return std::nullopt;
        hem = static_cast<char>(std::tolower(static_cast<unsigned char>(hem_field[0])));
    }
    auto v = to_double(field);
    if (!v) return std::nullopt;
    if (hem == 0 || hem == pos) return *v;
    if (hem == neg) return -std::abs(*v);
    return std::nullopt;
}

bool looks_like_header(const std::string& line) {
    return boost::algorithm::istarts_with(trim(line), "day");
}

std::string strip_tag(const std::string& f) {
    // "T:Monday" -> "Monday"
    auto colon = f.find(':');
    if (colon != std::string::npos && colon <= 2) return trim(std::string_view(f).substr(colon + 1));
    return f;
}

}  // namespace

long long TraceRow::epoch_s() const {
    using namespace std::chrono;
    const sys_days d = year_month_day{std::chrono::year{year}, std::chrono::month{static_cast<unsigned>(month)},
                                      std::chrono::day{static_cast<unsigned>(mday)}};
    return d.time_since_epoch().count() * 86400LL + hour * 3600LL + minute * 60LL + second;
}

TraceSchema TraceSchema::canonical() { return TraceSchema{}; }

TraceSchema TraceSchema::compact() {
    TraceSchema s;
    s.lat = 3;
    s.lat_hem = -1;
    s.lon = 4;
    s.lon_hem = -1;
    s.height = 5;
    s.speed = 6;
    s.heading = 7;
    s.vox = 8;
    return s;
}

TraceSchema TraceSchema::from_header(const std::string& header, char delim) {
    auto cols = split(header, delim);
    auto find = [&](const char* name, bool required) {
        for (std::size_t i = 0; i < cols.size(); ++i)
            if (boost::algorithm::iequals(cols[i], name)) return static_cast<int>(i);
        if (required) throw std::invalid_argument(std::string("trace header lacks column ") + name);
        return -1;
    };
    TraceSchema s;
    s.delim = delim;
    s.day = find("day", true);
    s.date = find("date", true);
    s.time = find("time", true);
    s.lat = find("lat", true);
    s.lat_hem = find("lat_hem", false);
    s.lon = find("lon", true);
    s.lon_hem = find("lon_hem", false);
    s.height = find("height_m", true);
    s.speed = find("speed_kmh", true);
    s.heading = find("heading_deg", true);
    s.vox = find("vox", false);
    return s;
}

ParseResult parse_trace(std::istream& in, const TraceSchema& schema, const std::string& trip_id) {
    ParseResult res;
    res.trace.trip_id = trip_id;
    std::string line;
    std::size_t lineno = 0;
    bool any_data = false;
    std::optional<long long> last_t;

    const int needed = std::max({schema.day, schema.date, schema.time, schema.lat, schema.lat_hem, schema.lon,
                                 schema.lon_hem, schema.height, schema.speed, schema.heading});

    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (trim(line).empty()) continue;
        if (!any_data && res.trace.rows.empty() && res.errors.empty() && looks_like_header(line)) continue;
        any_data = true;

        auto f = split(line, schema.delim);
        if (static_cast<int>(f.size()) <= needed) {
            res.errors.push_back({lineno, "row", "expected at least " + std::to_string(needed + 1) + " fields"});
            continue;
        }
        auto col = [&](int idx) -> const std::string& {
            static const std::string empty;
            return idx >= 0 && idx < static_cast<int>(f.size()) ? f[idx] : empty;
        };
        auto fail = [&](const char* field, const char* reason) {
            res.errors.push_back({lineno, field, reason});
        };

        TraceRow r;
        r.line = lineno;
        r.day = strip_tag(col(schema.day));
        if (r.day.empty()) {
            fail("day", "unparseable");
            continue;
        }
        auto date = integers_in(col(schema.date));
        if (date.size() != 3) {
            fail("date", "unparseable");
            continue;
        }
        r.year = date[0];
        r.month = date[1];
        r.mday = date[2];
        std::chrono::year_month_day ymd{std::chrono::year{r.year}, std::chrono::month{static_cast<unsigned>(r.month)},
                                        std::chrono::day{static_cast<unsigned>(r.mday)}};
        if (r.month < 1 || r.mday < 1 || !ymd.ok()) {
            fail("date", "out of range");
            continue;
        }
        auto tm = integers_in(col(schema.time));
        if (tm.size() != 3) {
            fail("time", "unparseable");
            continue;
        }
        r.hour = tm[0];
        r.minute = tm[1];
        r.second = tm[2];
        if (r.hour > 23 || r.minute > 59 || r.second > 59) {
            fail("time", "out of range");
            continue;
        }
        auto lat = coordinate(col(schema.lat), col(schema.lat_hem), 'n', 's');
        if (!lat) {
            fail("lat", "unparseable");
            continue;
        }
        auto lon = coordinate(col(schema.lon), col(schema.lon_hem), 'e', 'w');
        if (!lon) {
            fail("lon", "unparseable");
            continue;
        }
        auto height = to_double(col(schema.height));
        if (!height) {
            fail("height_m", "unparseable");
            continue;
        }
        auto speed = to_double(col(schema.speed));
        if (!speed) {
            fail("speed_kmh", "unparseable");
            continue;
        }
        auto heading = to_double(col(schema.heading));
        if (!heading) {
            fail("heading_deg", "unparseable");
            continue;
        }
        r.lat = *lat;
        r.lon = *lon;
        r.height_m = *height;
        r.speed_kmh = *speed;
        r.heading_deg = *heading;
        r.vox = col(schema.vox);

        if (r.lat < -90.0 || r.lat > 90.0) {
            fail("lat", "out of range");
            continue;
        }
        if (r.lon < -180.0 || r.lon > 180.0) {
            fail("lon", "out of range");
            continue;
        }
        if (r.speed_kmh < 0.0) {
            fail("speed_kmh", "out of range");
            continue;
        }
        if (r.heading_deg < 0.0 || r.heading_deg >= 360.0) {
            fail("heading_deg", "out of range");
            continue;
        }
        const long long t = r.epoch_s();
        if (last_t && t <= *last_t) {
            fail("time", "not after previous row");
            continue;
        }
        last_t = t;
        res.trace.rows.push_back(std::move(r));
    }

    if (res.trace.rows.empty()) throw EmptyTrace();
    for (std::size_t i = 1; i < res.trace.rows.size(); ++i)
        if (res.trace.rows[i].epoch_s() - res.trace.rows[i - 1].epoch_s() != 1) res.trace.gaps.emplace_back(i - 1, i);
    return res;
}

ParseResult parse_trace(std::istream& in) {
    std::string first;
    std::streampos start = in.tellg();
    while (std::getline(in, first) && trim(first).empty()) {
    }
    if (trim(first).empty()) throw EmptyTrace();
    TraceSchema schema;
    if (looks_like_header(first)) {
        schema = TraceSchema::from_header(trim(first));
    } else {
        schema = split(first, ',').size() <= 9 ? TraceSchema::compact() : TraceSchema::canonical();
    }
    in.clear();
    in.seekg(start);
    return parse_trace(in, schema);
}

void write_trace(std::ostream& out, const TripTrace& trace) {
    out << "day,date,time,lat,lat_hem,lon,lon_hem,height_m,speed_kmh,heading_deg,vox\n";
    for (const auto& r : trace.rows) {
        out << fmt::format("{},{}-{:02}-{:02},{:02}:{:02}:{:02},{},{},{},{},{},{},{},{}\n", r.day, r.year, r.month,
                           r.mday, r.hour, r.minute, r.second, std::abs(r.lat), r.lat < 0 ? 's' : 'n',
                           std::abs(r.lon), r.lon < 0 ? 'w' : 'e', r.height_m, r.speed_kmh, r.heading_deg, r.vox);
    }
}

double haversine_m(LatLon a, LatLon b) {
    constexpr double deg = std::numbers::pi / 180.0;
    const double dlat = (b.lat - a.lat) * deg;
    const double dlon = (b.lon - a.lon) * deg;
    const double h = std::sin(dlat / 2) * std::sin(dlat / 2) +
                     std::cos(a.lat * deg) * std::cos(b.lat * deg) * std::sin(dlon / 2) * std::sin(dlon / 2);
    return 2.0 * kEarthRadiusM * std::asin(std::min(1.0, std::sqrt(h)));
}

TripTrace clean_trace(const TripTrace& trace, double max_jump_m) {
    const auto& rows = trace.rows;
    if (rows.empty()) throw EmptyTrace();

    auto plausible = [&](const TraceRow& a, const TraceRow& b) {
        const double dt = static_cast<double>(std::max(1LL, b.epoch_s() - a.epoch_s()));
        return haversine_m(a.pos(), b.pos()) <= max_jump_m * dt;
    };

    std::size_t first = 0;
    // a glitched first row disagrees with rows 1 and 2, which agree with each other
    if (rows.size() >= 3 && !plausible(rows[0], rows[1]) && !plausible(rows[0], rows[2]) &&
        plausible(rows[1], rows[2]))
        first = 1;

    TripTrace out;
    out.trip_id = trace.trip_id;
    out.rows.push_back(rows[first]);
    for (std::size_t i = first + 1; i < rows.size(); ++i)
        if (plausible(out.rows.back(), rows[i])) out.rows.push_back(rows[i]);

    if (out.rows.empty()) throw EmptyTrace();
    for (std::size_t i = 1; i < out.rows.size(); ++i)
        if (out.rows[i].epoch_s() - out.rows[i - 1].epoch_s() != 1) out.gaps.emplace_back(i - 1, i);
    return out;
}

}  // namespace platoonsim
