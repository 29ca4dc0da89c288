#pragma once

#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include "platoonsim/trace.hpp"

namespace platoonsim {

struct RoutePoint {
    double lat = 0.0;
    double lon = 0.0;
    double height_m = 0.0;
};

struct Segment {
    double start_m = 0.0;
    double end_m = 0.0;
    double limit_mps = 0.0;
};

struct ContainerStop {
    std::string id;
    double position_m = 0.0;
    double dwell_s = 0.0;
};

struct SignalHead {
    double position_m = 0.0;
    double cycle_s = 0.0;
    double green_s = 0.0;
    double offset_s = 0.0;
};

struct Route {
    std::vector<RoutePoint> points;
    std::vector<double> cum_dist;
    std::vector<Segment> segments;
    std::vector<ContainerStop> stops;    // sorted by position
    std::vector<SignalHead> signals;     // sorted by position
    double length_m = 0.0;
};

class RouteTooShort : public std::runtime_error {
public:
    explicit RouteTooShort(double len) : std::runtime_error("route too short: " + std::to_string(len) + " m") {}
};

class OutOfRoute : public std::out_of_range {
public:
    explicit OutOfRoute(double s) : std::out_of_range("position outside route: " + std::to_string(s)) {}
};

class RouteFormatError : public std::runtime_error {
public:
    RouteFormatError(std::size_t line, const std::string& what)
        : std::runtime_error("route line " + std::to_string(line) + ": " + what) {}
};

Route route_from_trace(const TripTrace& trace, double epsilon_m);

double limit_at(const Route& route, double s);

bool signal_is_green(const SignalHead& sig, double t);

// throws RouteFormatError; validates tiling, limits, stops and signals
Route read_route(std::istream& in);
void write_route(std::ostream& out, const Route& route);

// 95th percentile (nearest rank) in km/h, rounded up to a 5 km/h step, returned in m/s
double derived_limit_mps(std::vector<double> speeds_kmh);

}  // namespace platoonsim
