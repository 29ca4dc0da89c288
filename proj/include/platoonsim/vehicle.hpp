#pragma once

#include <cstddef>
#include <optional>
#include <string>

#include "platoonsim/rng.hpp"
#include "platoonsim/road.hpp"

namespace platoonsim {

struct VehicleParams {
    double length = 5.94;
    double mass = 3500.0;
    double v_max = 20.0;
    double v_min = 5.0;
    double a_max = 2.5;
    double b_comf = 2.5;
    double b_emergency = 9.0;
    double tau = 1.0;
    double sigma = 0.5;
    double min_gap = 2.5;  // standstill bumper gap kept by car-following

    // throws std::invalid_argument naming the offending field
    void validate() const;
};

struct VehicleState {
    std::string id;
    double s = 0.0;
    double v = 0.0;
    double a = 0.0;
    std::optional<double> stopped_until;
    std::size_t next_stop = 0;  // index into Route::stops of the next stop not yet served
};

struct LeaderInfo {
    double v = 0.0;
    double gap = 0.0;
};

double krauss_safe_speed(double v_leader, double v_follower, double gap, double b, double tau);

VehicleState krauss_step(const VehicleState& state, const VehicleParams& params, std::optional<LeaderInfo> leader,
                         double limit, Lcg64& rng, double dt);

struct Gate {
    double position_m = 0.0;  // stationary virtual leader
    bool hold = false;        // dwelling at a container stop
};

// Red signals inside the braking window w*tau + w^2/(2 b_comf), w = v + a_max*dt,
// and pending container stops with dwell > 0 become a stationary virtual
// leader. A red signal nearer than v^2/(2 b_emergency) is driven through, as
// is one whose Krauss stop would demand more than max_signal_decel in one step.
std::optional<Gate> stop_and_signal_gate(const VehicleState& state, const VehicleParams& params, const Route& route,
                                         double t, double dt = 0.1,
                                         std::optional<double> max_signal_decel = std::nullopt);

// one-step deceleration above which the scenario drives through a red signal
inline double amber_decel(const VehicleParams& p) { return 0.5 * (p.b_comf + p.b_emergency); }

// Post-integration bookkeeping for container stops: arrival starts the dwell,
// release marks the stop served, dwell-free stops are served when passed.
// Returns true when the vehicle arrived this step.
bool update_stop_progress(VehicleState& state, const Route& route, double t);

inline constexpr double kStopArrivalGap = 0.5;
inline constexpr double kStopArrivalSpeed = 0.5;

// Speed cap that lets the vehicle reach every limit drop ahead at the new
// limit when braking at b.
double anticipated_limit(const Route& route, double s, double b, double dt);

}  // namespace platoonsim
