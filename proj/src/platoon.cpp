#include "platoonsim/platoon.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace platoonsim {

void PlatoonConfig::validate() const {
    auto need = [](bool ok, const char* what) {
        if (!ok) throw std::invalid_argument(std::string("platoon parameter out of range: ") + what);
    };
    need(gap_des > 0, "gap_des");
    need(n_cars >= 1, "n_cars");
    need(platoon_size >= 1 && platoon_size <= n_cars, "platoon_size");
    need(c1 > 0 && c1 < 1, "c1");
    need(xi >= 1, "xi");
    need(omega_n > 0, "omega_n");
    need(osc_amp >= 0, "osc_amp");
    need(osc_freq >= 0, "osc_freq");
    need(v_cruise >= 0, "v_cruise");
    need(leader_gain > 0, "leader_gain");
    need(leader_accel_frac > 0 && leader_accel_frac <= 1, "leader_accel_frac");
}

std::vector<PlatoonRole> form_platoon(const std::vector<VehicleState>& vehicles, const PlatoonConfig& cfg) {
    for (std::size_t i = 1; i < vehicles.size(); ++i)
        if (vehicles[i].s > vehicles[i - 1].s) throw std::invalid_argument("vehicles must be ordered front to back");
    const auto size = static_cast<std::size_t>(std::max(1, cfg.platoon_size));
    std::vector<PlatoonRole> roles;
    for (std::size_t i = 0; i < vehicles.size(); ++i) {
        const int idx = static_cast<int>(i % size);
        roles.push_back({idx == 0 ? RoleKind::Leader : RoleKind::Follower, idx, static_cast<int>(i / size)});
    }
    return roles;
}

double gap_error(const VehicleState& ego, double pred_s, double pred_length, const PlatoonConfig& cfg) {
    return (pred_s - pred_length - ego.s) - cfg.gap_des;
}

double cacc_accel(const VehicleState& ego, const Beacon& pred, const Beacon& lead, const PlatoonConfig& cfg,
                  double pred_length, const VehicleParams& params) {
    const double e = gap_error(ego, pred.s, pred_length, cfg);
    const double st = cfg.xi + std::sqrt(cfg.xi * cfg.xi - 1.0);
    const double u = (1.0 - cfg.c1) * pred.a + cfg.c1 * lead.a +
                     (2.0 * cfg.xi - cfg.c1 * st) * cfg.omega_n * (pred.v - ego.v) +
                     cfg.c1 * st * cfg.omega_n * (lead.v - ego.v) + cfg.omega_n * cfg.omega_n * e;
    return std::clamp(u, -params.b_emergency, params.a_max);
}

bool cacc_engages(double e, const PlatoonConfig& cfg) { return std::abs(e) < 2.0 * cfg.gap_des; }

double leader_speed(double t, const PlatoonConfig& cfg, double limit) {
    const double v = cfg.v_cruise + cfg.osc_amp * std::sin(2.0 * std::numbers::pi * cfg.osc_freq * t);
    return std::max(0.0, std::min(limit, v));
}

double leader_accel(const VehicleState& state, double t, const PlatoonConfig& cfg, const VehicleParams& params,
                    double limit) {
    const double w = 2.0 * std::numbers::pi * cfg.osc_freq;
    const double raw = cfg.v_cruise + cfg.osc_amp * std::sin(w * t);
    const double target = leader_speed(t, cfg, limit);
    const double slope = (raw == target) ? cfg.osc_amp * w * std::cos(w * t) : 0.0;
    const double u = slope + cfg.leader_gain * (target - state.v);
    const double cap = cfg.leader_accel_frac * params.a_max;
    return std::clamp(u, -cap, cap);
}

}  // namespace platoonsim
