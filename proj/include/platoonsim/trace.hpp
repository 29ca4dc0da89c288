#pragma once

#include <cstddef>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace platoonsim {

struct LatLon {
    double lat = 0.0;
    double lon = 0.0;
};

struct TraceRow {
    std::string day;
    int year = 0, month = 0, mday = 0;
    int hour = 0, minute = 0, second = 0;
    double lat = 0.0;
    double lon = 0.0;
    double height_m = 0.0;
    double speed_kmh = 0.0;
    double heading_deg = 0.0;
    std::string vox;
    std::size_t line = 0;

    // seconds since 1970-01-01 00:00:00 (local clock of the logger)
    long long epoch_s() const;
    LatLon pos() const { return {lat, lon}; }
};

struct TripTrace {
    std::string trip_id;
    std::vector<TraceRow> rows;
    std::vector<std::pair<std::size_t, std::size_t>> gaps;
};

struct RowError {
    std::size_t line = 0;
    std::string field;
    std::string reason;
};

class EmptyTrace : public std::runtime_error {
public:
    EmptyTrace() : std::runtime_error("empty trace") {}
};

// Column indices into a delimited row. A negative *_hem index means the
// hemisphere is carried inside the coordinate field ("48.3 n") or as a sign.
struct TraceSchema {
    int day = 0, date = 1, time = 2;
    int lat = 3, lat_hem = 4, lon = 5, lon_hem = 6;
    int height = 7, speed = 8, heading = 9, vox = 10;
    char delim = ',';

    static TraceSchema canonical();
    // nine columns, hemisphere letter inside the coordinate field
    static TraceSchema compact();
    // resolves columns by name; throws std::invalid_argument on a missing column
    static TraceSchema from_header(const std::string& header, char delim = ',');
};

struct ParseResult {
    TripTrace trace;
    std::vector<RowError> errors;
};

// Rows that fail to parse or violate range invariants are reported in
// ParseResult::errors. A header line, if present, is detected and used.
ParseResult parse_trace(std::istream& in, const TraceSchema& schema, const std::string& trip_id = "");
ParseResult parse_trace(std::istream& in);

// canonical column order with header
void write_trace(std::ostream& out, const TripTrace& trace);

TripTrace clean_trace(const TripTrace& trace, double max_jump_m = 60.0);

double haversine_m(LatLon a, LatLon b);

inline constexpr double kEarthRadiusM = 6371000.0;

}  // namespace platoonsim
