#pragma once

#include <cstddef>
#include <vector>

#include "platoonsim/channel.hpp"
#include "platoonsim/vehicle.hpp"

namespace platoonsim {

struct PlatoonConfig {
    double gap_des = 5.0;
    int n_cars = 3;
    int platoon_size = 3;
    double c1 = 0.8;
    double xi = 1.0;
    double omega_n = 0.2;
    double osc_freq = 0.2;
    double osc_amp = 0.2;
    double v_cruise = 19.8;
    // leader speed tracking: a = da_target + leader_gain*(v_target - v), |a| <= leader_accel_frac*a_max
    double leader_gain = 0.5;
    double leader_accel_frac = 0.8;

    void validate() const;
};

enum class RoleKind { Leader, Follower };

struct PlatoonRole {
    RoleKind kind = RoleKind::Leader;
    int index = 0;  // 0 for the leader, 1.. for followers
    int platoon = 0;
};

// vehicles ordered front to back (s descending); throws std::invalid_argument otherwise
std::vector<PlatoonRole> form_platoon(const std::vector<VehicleState>& vehicles, const PlatoonConfig& cfg);

double cacc_accel(const VehicleState& ego, const Beacon& pred, const Beacon& lead, const PlatoonConfig& cfg,
                  double pred_length, const VehicleParams& params);

double gap_error(const VehicleState& ego, double pred_s, double pred_length, const PlatoonConfig& cfg);

// a follower switches from approach to CACC once |e| < 2*gap_des
bool cacc_engages(double e, const PlatoonConfig& cfg);

double leader_speed(double t, const PlatoonConfig& cfg, double limit);

// acceleration tracking leader_speed(t) with feed-forward of its slope
double leader_accel(const VehicleState& state, double t, const PlatoonConfig& cfg, const VehicleParams& params,
                    double limit);

}  // namespace platoonsim
