#include "platoonsim/vehicle.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace platoonsim {

void VehicleParams::validate() const {
    auto need = [](bool ok, const char* what) {
        if (!ok) throw std::invalid_argument(std::string("vehicle parameter out of range: ") + what);
    };
    need(length > 0, "length");
    need(mass > 0, "mass");
    need(v_min > 0 && v_min <= v_max, "v_min/v_max");
    need(a_max > 0, "a_max");
    need(b_comf > 0, "b_comf");
    need(b_emergency >= b_comf, "b_emergency");
    need(tau > 0, "tau");
    need(sigma >= 0 && sigma <= 1, "sigma");
    need(min_gap >= 0, "min_gap");
}

double krauss_safe_speed(double v_leader, double v_follower, double gap, double b, double tau) {
    const double v = v_leader + (gap - v_leader * tau) / ((v_leader + v_follower) / (2.0 * b) + tau);
    return std::max(0.0, v);
}

VehicleState krauss_step(const VehicleState& state, const VehicleParams& params, std::optional<LeaderInfo> leader,
                         double limit, Lcg64& rng, double dt) {
    double v_des = std::min({state.v + params.a_max * dt, params.v_max, limit});
    if (leader) v_des = std::min(v_des, krauss_safe_speed(leader->v, state.v, leader->gap, params.b_comf, params.tau));
    const double u = uniform01(rng);
    double v_next = std::max(0.0, v_des - params.sigma * params.a_max * dt * u);
    v_next = std::max(v_next, state.v - params.b_emergency * dt);

    VehicleState next = state;
    next.s = state.s + v_next * dt;
    next.a = (v_next - state.v) / dt;
    next.v = v_next;
    return next;
}

std::optional<Gate> stop_and_signal_gate(const VehicleState& state, const VehicleParams& params, const Route& route,
                                         double t, double dt, std::optional<double> max_signal_decel) {
    if (state.stopped_until && t < *state.stopped_until) return Gate{state.s, true};

    const double v = state.v;
    const double v_reach = v + params.a_max * dt;
    const double window = v_reach * params.tau + v_reach * v_reach / (2.0 * params.b_comf);
    const double point_of_no_return = v * v / (2.0 * params.b_emergency);
    std::optional<Gate> gate;

    for (std::size_t i = state.next_stop; i < route.stops.size(); ++i) {
        const auto& stop = route.stops[i];
        if (stop.dwell_s <= 0.0) continue;
        const double d = stop.position_m - state.s;
        if (d >= -kStopArrivalGap && d <= window) gate = Gate{stop.position_m, false};
        break;
    }

    auto first = std::lower_bound(route.signals.begin(), route.signals.end(), state.s,
                                  [](const SignalHead& sig, double s) { return sig.position_m < s; });
    for (auto it = first; it != route.signals.end(); ++it) {
        const double d = it->position_m - state.s;
        if (d > window) break;
        if (signal_is_green(*it, t) || d < point_of_no_return) continue;
        if (max_signal_decel) {
            const double v_stop = krauss_safe_speed(0.0, v, std::max(d, 0.0), params.b_comf, params.tau);
            if ((v - v_stop) / dt > *max_signal_decel) continue;
        }
        if (!gate || it->position_m < gate->position_m) gate = Gate{it->position_m, false};
        break;
    }
    return gate;
}

bool update_stop_progress(VehicleState& state, const Route& route, double t) {
    if (state.stopped_until) {
        if (t >= *state.stopped_until - 1e-9) {
            state.stopped_until.reset();
            ++state.next_stop;
        }
        return false;
    }
    while (state.next_stop < route.stops.size()) {
        const auto& stop = route.stops[state.next_stop];
        const double d = stop.position_m - state.s;
        if (stop.dwell_s <= 0.0) {
            if (d > 0.0) break;
            ++state.next_stop;
            continue;
        }
        if (d <= kStopArrivalGap && state.v < kStopArrivalSpeed) {
            state.stopped_until = t + stop.dwell_s;
            return true;
        }
        if (d < -kStopArrivalGap) {
            // overshot without stopping; the stop is missed
            ++state.next_stop;
            continue;
        }
        break;
    }
    return false;
}

double anticipated_limit(const Route& route, double s, double b, double dt) {
    double cap = limit_at(route, std::clamp(s, 0.0, route.length_m));
    for (const auto& seg : route.segments) {
        if (seg.start_m <= s) continue;
        const double d = seg.start_m - s;
        if (2.0 * b * d > 1e4) break;
        const double reach = std::sqrt(seg.limit_mps * seg.limit_mps + 2.0 * b * d);
        cap = std::min(cap, std::max(seg.limit_mps, std::min(reach, d / dt)));
    }
    return cap;
}

}  // namespace platoonsim
