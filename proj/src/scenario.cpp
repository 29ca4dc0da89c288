#include "platoonsim/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <deque>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>

#include <boost/algorithm/string.hpp>
#include <fmt/format.h>

#include "platoonsim/channel.hpp"
#include "platoonsim/platoon.hpp"

namespace platoonsim {

std::vector<Spawn> generate_demand(std::uint64_t seed, std::size_t n_steps, double spawn_prob,
                                   const std::vector<std::string>& types, const std::string& route) {
    Lcg64 rng(seed);
    std::vector<Spawn> out;
    int veh_nr = 0;
    for (std::size_t i = 0; i < n_steps; ++i) {
        if (uniform01(rng) < spawn_prob) {
            const std::string type = types.empty() ? "default" : types[static_cast<std::size_t>(veh_nr) % types.size()];
            out.push_back({veh_nr, type, i, route});
            ++veh_nr;
        }
    }
    return out;
}

namespace {

enum class Kind { Van, Background };

struct Agent {
    VehicleState st;
    Kind kind = Kind::Background;
    std::size_t van = 0;  // index into result vehicles
    PlatoonRole role;
    bool engaged = false;
    bool degraded = false;
    double desired = 0.0;
};

constexpr double kInf = std::numeric_limits<double>::infinity();

std::optional<double> crossing_time(double pos, double s0, double s1, double t, double dt) {
    if (!(s0 < pos && s1 >= pos)) return std::nullopt;
    return t + dt * (pos - s0) / (s1 - s0);
}

}  // namespace

ScenarioResult run(const ScenarioConfig& cfg, const Route& route, const EmissionCoeffs& coeffs,
                   const RunOptions& opts) {
    cfg.validate();
    const double dt = cfg.dt;
    const auto& vp = cfg.vehicle;
    const bool connected = cfg.mode == Mode::Connected;
    const int n_vans = cfg.platoon.n_cars;

    ScenarioResult res;
    res.mode = cfg.mode;
    res.coeff_class = coeffs.class_name;
    res.dt = dt;
    res.min_gap_m = kInf;

    if (route.stops.empty()) throw std::invalid_argument("route has no container stops");
    const double origin = route.stops.front().position_m;
    const double destination = route.stops.back().position_m;

    Lcg64 driver_rng = make_stream(cfg.seed, 1);
    Lcg64 desire_rng = make_stream(cfg.seed, 2);
    Lcg64 scratch(0);

    std::vector<Agent> agents;
    for (int k = 0; k < n_vans; ++k) {
        Agent a;
        a.kind = Kind::Van;
        a.van = static_cast<std::size_t>(k);
        a.st.s = static_cast<double>(n_vans - 1 - k) * (vp.length + cfg.spawn_gap_m);
        a.desired = vp.v_max;
        agents.push_back(a);
    }
    {
        std::vector<VehicleState> ordered;
        for (const auto& a : agents) ordered.push_back(a.st);
        const auto roles = connected ? form_platoon(ordered, cfg.platoon)
                                     : std::vector<PlatoonRole>(agents.size(), PlatoonRole{});
        for (std::size_t k = 0; k < agents.size(); ++k) {
            auto& a = agents[k];
            a.role = roles[k];
            VehicleResult vr;
            if (connected) {
                const bool lead = a.role.kind == RoleKind::Leader;
                vr.id = fmt::format("{}DV{}", lead ? "L" : "F", k + 1);
                vr.role = lead ? "leader" : "follower";
            } else {
                vr.id = fmt::format("DV{}", k + 1);
                vr.role = "independent";
            }
            a.st.id = vr.id;
            if (a.st.s >= origin) vr.t_origin = 0.0;
            res.vehicles.push_back(vr);
        }
    }

    // platoon groups as van indices, front to back
    std::vector<std::vector<std::size_t>> groups;
    if (connected) {
        for (const auto& a : agents) {
            if (a.role.kind == RoleKind::Leader) groups.emplace_back();
            groups.back().push_back(a.van);
        }
    }
    std::vector<std::size_t> leader_of(static_cast<std::size_t>(n_vans), 0);
    for (const auto& g : groups)
        for (auto m : g) leader_of[m] = g.front();

    BeaconChannel channel(cfg.channel);
    std::vector<std::uint64_t> seq(static_cast<std::size_t>(n_vans), 0);
    std::vector<VehicleState> van_states(static_cast<std::size_t>(n_vans));
    std::vector<bool> van_active(static_cast<std::size_t>(n_vans), true);
    for (const auto& a : agents) van_states[a.van] = a.st;
    if (connected) {
        std::vector<Beacon> init;
        for (const auto& a : agents) init.push_back(Beacon{a.van, a.st.s, a.st.v, a.st.a, 0.0, 0});
        channel.prime(init, groups);
    }

    const auto n_steps = static_cast<std::size_t>(std::ceil(cfg.max_sim_time / dt - 1e-9));
    const auto spawns = generate_demand(cfg.seed, n_steps, cfg.background.spawn_prob, {"background"});
    std::size_t next_spawn = 0;
    std::deque<Spawn> waiting;

    if (opts.step_csv) *opts.step_csv << kStepCsvHeader << '\n';
    if (opts.beacon_csv) *opts.beacon_csv << kBeaconCsvHeader << '\n';

    auto platoon_limit = [&](double s) {
        return cfg.platoon_obeys_limits ? anticipated_limit(route, s, vp.b_comf, dt) : kInf;
    };
    auto road_limit = [&](double s) { return anticipated_limit(route, s, vp.b_comf, dt); };
    auto gate_leader = [&](const VehicleState& st, double t) -> std::optional<LeaderInfo> {
        auto g = stop_and_signal_gate(st, vp, route, t, dt, amber_decel(vp));
        if (!g) return std::nullopt;
        return LeaderInfo{0.0, g->hold ? 0.0 : g->position_m - st.s};
    };
    auto closer = [](std::optional<LeaderInfo> a, std::optional<LeaderInfo> b) {
        if (!a) return b;
        if (!b) return a;
        return a->gap <= b->gap ? a : b;
    };

    std::size_t vans_done = 0;
    std::size_t step = 0;
    double t = 0.0;
    std::vector<double> v_next(agents.size());

    for (;; ++step) {
        t = static_cast<double>(step) * dt;
        if (vans_done == static_cast<std::size_t>(n_vans) || t >= cfg.max_sim_time - 1e-9) break;

        // (1) channel
        if (connected) {
            std::vector<std::size_t> members;
            for (const auto& a : agents)
                if (a.kind == Kind::Van) members.push_back(a.van);
            const auto beacons = schedule_beacons(t, members, van_states, cfg.channel, dt, seq);
            const auto log = channel.deliver(beacons, t, groups);
            if (opts.beacon_csv) {
                for (const auto& d : log) {
                    std::string to;
                    for (auto r : d.delivered_to) {
                        if (!to.empty()) to += ';';
                        to += res.vehicles[r].id;
                    }
                    *opts.beacon_csv << fmt::format("{:.1f},{},{},{:.4f},{:.4f},{:.4f},{}\n", d.beacon.t_sent,
                                                    res.vehicles[d.beacon.sender].id, d.beacon.seq, d.beacon.s,
                                                    d.beacon.v, d.beacon.a, to);
                }
            }
        }

        // (2) control, front to back, from start-of-step states
        v_next.assign(agents.size(), 0.0);
        for (std::size_t i = 0; i < agents.size(); ++i) {
            auto& ag = agents[i];
            const auto& st = ag.st;
            std::optional<LeaderInfo> ahead;
            double true_gap = kInf;
            if (i > 0) {
                const auto& p = agents[i - 1].st;
                true_gap = p.s - vp.length - st.s;
                ahead = LeaderInfo{p.v, true_gap - vp.min_gap};
            }
            ag.degraded = false;

            const bool platoon_member = connected && ag.kind == Kind::Van;
            if (!platoon_member) {
                const double lim = std::min(road_limit(st.s), ag.desired);
                auto obstacle = closer(ahead, gate_leader(st, t));
                v_next[i] = krauss_step(st, vp, obstacle, lim, driver_rng, dt).v;
                continue;
            }

            VehicleParams auto_p = vp;
            auto_p.sigma = 0.0;
            const double cap = platoon_limit(st.s);

            if (ag.role.kind == RoleKind::Leader) {
                const double lim = std::min(cap, vp.v_max);
                const double u = leader_accel(st, t, cfg.platoon, vp, lim);
                double v = std::clamp(st.v + u * dt, 0.0, vp.v_max);
                if (auto g = gate_leader(st, t)) v = std::min(v, krauss_safe_speed(0.0, st.v, g->gap, vp.b_comf, vp.tau));
                if (ahead) v = std::min(v, krauss_safe_speed(ahead->v, st.v, ahead->gap, vp.b_comf, vp.tau));
                v_next[i] = std::max({v, 0.0, st.v - vp.b_emergency * dt});
                continue;
            }

            const bool pred_is_member = i > 0 && agents[i - 1].kind == Kind::Van &&
                                        leader_of[agents[i - 1].van] == leader_of[ag.van];
            if (!pred_is_member) {
                // platoon ahead has left the route
                auto obstacle = closer(ahead, gate_leader(st, t));
                v_next[i] = krauss_step(st, auto_p, obstacle, std::min(cap, vp.v_max), scratch, dt).v;
                continue;
            }
            const auto& pred_state = agents[i - 1].st;
            if (!ag.engaged && cacc_engages(gap_error(st, pred_state.s, vp.length, cfg.platoon), cfg.platoon))
                ag.engaged = true;

            if (!ag.engaged) {
                std::optional<LeaderInfo> target = LeaderInfo{pred_state.v, true_gap - cfg.platoon.gap_des};
                auto obstacle = closer(target, gate_leader(st, t));
                v_next[i] = krauss_step(st, auto_p, obstacle, std::min(cap, vp.v_max), scratch, dt).v;
                continue;
            }

            const Beacon* pb = channel.latest(ag.van, agents[i - 1].van);
            const Beacon* lb = channel.latest(ag.van, leader_of[ag.van]);
            if (!channel.fresh(pb, t) || !channel.fresh(lb, t)) {
                ag.degraded = true;
                ++res.degraded_steps;
                auto obstacle = closer(ahead, gate_leader(st, t));
                v_next[i] = krauss_step(st, auto_p, obstacle, std::min(cap, vp.v_max), scratch, dt).v;
                continue;
            }
            const double u = cacc_accel(st, *pb, *lb, cfg.platoon, vp.length, vp);
            double v = std::clamp(st.v + u * dt, 0.0, vp.v_max);
            v = std::min(v, krauss_safe_speed(pred_state.v, st.v, std::max(0.0, true_gap), vp.b_emergency, dt));
            v_next[i] = std::max(v, st.v - vp.b_emergency * dt);
        }

        // (3) integrate
        const double t1 = t + dt;
        std::vector<double> s_before(agents.size());
        for (std::size_t i = 0; i < agents.size(); ++i) {
            auto& st = agents[i].st;
            s_before[i] = st.s;
            st.a = (v_next[i] - st.v) / dt;
            st.v = v_next[i];
            st.s += v_next[i] * dt;
        }

        // (4) stops, signals, trip bookkeeping, route exit, insertion
        for (std::size_t i = 0; i < agents.size(); ++i) {
            auto& ag = agents[i];
            update_stop_progress(ag.st, route, t1);
            if (ag.kind != Kind::Van) continue;
            auto& vr = res.vehicles[ag.van];
            if (!vr.t_origin) vr.t_origin = crossing_time(origin, s_before[i], ag.st.s, t, dt);
            if (vr.t_origin && !vr.t_destination) {
                if (auto td = crossing_time(destination, s_before[i], ag.st.s, t, dt)) {
                    vr.t_destination = td;
                    vr.travel_time_s = *td - *vr.t_origin;
                    ++vans_done;
                }
            }
        }

        // (5) emissions and step output for vans
        for (std::size_t i = 0; i < agents.size(); ++i) {
            const auto& ag = agents[i];
            if (ag.kind != Kind::Van) continue;
            auto& vr = res.vehicles[ag.van];
            EmissionRecord rec = step_emissions(ag.st, coeffs, t1);
            const bool in_trip = vr.t_origin && (!vr.t_destination || *vr.t_destination > t);
            if (in_trip) {
                vr.totals.dt = dt;
                vr.totals.add(rec);
            }
            std::optional<double> gap;
            if (i > 0) gap = agents[i - 1].st.s - vp.length - ag.st.s;
            if (opts.step_csv) {
                *opts.step_csv << fmt::format("{:.1f},{},{},{:.4f},{:.4f},{:.4f},{:.4f},{:.4f},{:.4f},{:.4f},{:.6f},",
                                              t1, vr.id, vr.role, ag.st.s, ag.st.v, ag.st.a, rec.co2, rec.co, rec.nox,
                                              rec.hc, rec.fuel);
                if (gap) *opts.step_csv << fmt::format("{:.4f}", *gap);
                *opts.step_csv << ',' << (ag.degraded ? 1 : 0) << '\n';
            }
            if (opts.record_steps)
                res.steps.push_back({t1, ag.van, ag.st.s, ag.st.v, ag.st.a, rec, gap, ag.degraded});
        }

        for (std::size_t i = 1; i < agents.size(); ++i)
            res.min_gap_m = std::min(res.min_gap_m, agents[i - 1].st.s - vp.length - agents[i].st.s);

        // vehicles leave at the end of the route
        while (!agents.empty() && agents.front().st.s >= route.length_m) {
            if (agents.front().kind == Kind::Background)
                ++res.background_finished;
            else
                van_active[agents.front().van] = false;
            agents.erase(agents.begin());
        }

        while (next_spawn < spawns.size() && spawns[next_spawn].depart_step <= step) waiting.push_back(spawns[next_spawn++]);
        if (!waiting.empty() && res.background_spawned < static_cast<std::size_t>(cfg.background.max_vehicles)) {
            const double desired = vp.v_min + (vp.v_max - vp.v_min) * uniform01(desire_rng);
            double v0 = std::min(desired, limit_at(route, 0.0));
            bool room = true;
            if (!agents.empty()) {
                const auto& last = agents.back().st;
                const double gap = last.s - vp.length;
                room = gap >= vp.min_gap + 1.0;
                if (room) v0 = std::min(v0, krauss_safe_speed(last.v, v0, gap - vp.min_gap, vp.b_comf, vp.tau));
            }
            if (room) {
                Agent a;
                a.kind = Kind::Background;
                a.st.id = fmt::format("bg{}", waiting.front().id);
                a.st.v = v0;
                a.desired = desired;
                agents.push_back(a);
                waiting.pop_front();
                ++res.background_spawned;
            }
        }
        for (const auto& a : agents)
            if (a.kind == Kind::Van) van_states[a.van] = a.st;
    }

    res.sim_time = t;
    for (const auto& a : agents)
        if (a.kind == Kind::Background) ++res.background_running;
    res.background_pending = waiting.size() + (spawns.size() - next_spawn);
    for (const auto& vr : res.vehicles)
        if (!vr.travel_time_s) res.unfinished.push_back(vr.id);
    if (!std::isfinite(res.min_gap_m)) res.min_gap_m = 0.0;
    return res;
}

std::filesystem::path coeff_path(const ScenarioConfig& cfg) {
    if (const char* env = std::getenv("PLATOONSIM_COEFFS"); env && *env) return env;
    return cfg.coeff_file;
}

Route load_route_file(const std::filesystem::path& file) {
    std::ifstream in(file);
    if (!in) throw std::filesystem::filesystem_error("cannot open route file", file,
                                                     std::make_error_code(std::errc::no_such_file_or_directory));
    return read_route(in);
}

EmissionCoeffs load_coeffs_file(const std::filesystem::path& file) {
    std::ifstream in(file);
    if (!in) throw std::filesystem::filesystem_error("cannot open coefficient file", file,
                                                     std::make_error_code(std::errc::no_such_file_or_directory));
    return read_coeffs(in);
}

ScenarioResult run(const ScenarioConfig& cfg, const RunOptions& opts) {
    const Route route = load_route_file(cfg.route_file);
    const EmissionCoeffs coeffs = load_coeffs_file(coeff_path(cfg));
    return run(cfg, route, coeffs, opts);
}

namespace {

double reduction(double baseline, double value) {
    return baseline == 0.0 ? 0.0 : (baseline - value) / baseline * 100.0;
}

}  // namespace

ComparisonReport compare(const ScenarioResult& a, const ScenarioResult& b) {
    if (!a.finished() || !b.finished()) throw RefusesComparison("comparison needs finished results on both sides");
    ComparisonReport rep;
    rep.vehicles_a = a.vehicles;
    rep.vehicles_b = b.vehicles;
    for (const auto& v : a.vehicles) {
        rep.travel_time_a += *v.travel_time_s;
        rep.totals_a += v.totals;
    }
    for (const auto& v : b.vehicles) {
        rep.travel_time_b += *v.travel_time_s;
        rep.totals_b += v.totals;
    }
    rep.pct.travel_time = reduction(rep.travel_time_b, rep.travel_time_a);
    rep.pct.co2 = reduction(rep.totals_b.total(Quantity::CO2), rep.totals_a.total(Quantity::CO2));
    rep.pct.co = reduction(rep.totals_b.total(Quantity::CO), rep.totals_a.total(Quantity::CO));
    rep.pct.nox = reduction(rep.totals_b.total(Quantity::NOx), rep.totals_a.total(Quantity::NOx));
    rep.pct.hc = reduction(rep.totals_b.total(Quantity::HC), rep.totals_a.total(Quantity::HC));
    rep.pct.fuel = reduction(rep.totals_b.total(Quantity::Fuel), rep.totals_a.total(Quantity::Fuel));
    return rep;
}

void write_summary_csv(std::ostream& out, const ScenarioResult& r) {
    out << kSummaryCsvHeader << '\n';
    for (const auto& v : r.vehicles) {
        const auto& tt = v.totals;
        out << fmt::format("{},{},{},{:.4f},{:.4f},{:.4f},{:.4f},{:.6f}\n", v.id, v.role,
                           v.travel_time_s ? fmt::format("{:.2f}", *v.travel_time_s) : std::string("unfinished"),
                           tt.total(Quantity::CO2), tt.total(Quantity::CO), tt.total(Quantity::NOx),
                           tt.total(Quantity::HC), tt.total(Quantity::Fuel));
    }
}

ScenarioResult read_summary_csv(std::istream& in, double dt) {
    ScenarioResult r;
    r.dt = dt;
    std::string line;
    if (!std::getline(in, line) || boost::algorithm::trim_copy(line) != kSummaryCsvHeader)
        throw std::runtime_error("summary CSV header mismatch");
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        boost::algorithm::trim(line);
        if (line.empty()) continue;
        std::vector<std::string> f;
        boost::algorithm::split(f, line, boost::is_any_of(","));
        if (f.size() != 8) throw std::runtime_error(fmt::format("summary CSV line {}: expected 8 fields", lineno));
        VehicleResult v;
        v.id = f[0];
        v.role = f[1];
        try {
            if (f[2] != "unfinished") v.travel_time_s = std::stod(f[2]);
            v.totals.dt = dt;
            for (int q = 0; q < 5; ++q) v.totals.rate_sum[static_cast<std::size_t>(q)] = std::stod(f[3 + q]) / dt;
        } catch (const std::exception&) {
            throw std::runtime_error(fmt::format("summary CSV line {}: bad number", lineno));
        }
        if (!v.travel_time_s) r.unfinished.push_back(v.id);
        if (v.role == "leader" || v.role == "follower") r.mode = Mode::Connected;
        r.vehicles.push_back(v);
    }
    return r;
}

void write_report(std::ostream& out, const ComparisonReport& rep) {
    auto table = [&](const char* title, const std::vector<VehicleResult>& vs) {
        out << title << '\n';
        out << fmt::format("  {:<6} {:>14} {:>16} {:>16} {:>14} {:>14}\n", "veh", "travel_time_s", "co2_mean_mgps",
                           "total_mean_mgps", "fuel_mean_mlps", "co2_mg");
        for (const auto& v : vs) {
            const double tt = v.travel_time_s.value_or(0.0);
            auto mean = [&](Quantity q) { return tt > 0.0 ? v.totals.total(q) / tt : 0.0; };
            const double total = mean(Quantity::CO2) + mean(Quantity::CO) + mean(Quantity::NOx) + mean(Quantity::HC);
            out << fmt::format("  {:<6} {:>14.2f} {:>16.2f} {:>16.2f} {:>14.4f} {:>14.1f}\n", v.id, tt,
                               mean(Quantity::CO2), total, mean(Quantity::Fuel), v.totals.total(Quantity::CO2));
        }
    };
    table("scenario_a", rep.vehicles_a);
    table("scenario_b (baseline)", rep.vehicles_b);
    out << fmt::format("travel_time_sum_s: {:.2f} vs {:.2f}\n", rep.travel_time_a, rep.travel_time_b);
    out << fmt::format("fuel_sum_ml: {:.3f} vs {:.3f}\n", rep.totals_a.total(Quantity::Fuel),
                       rep.totals_b.total(Quantity::Fuel));
    out << fmt::format("travel_time_reduction_pct: {:.2f}\n", rep.pct.travel_time);
    out << fmt::format("co2_reduction_pct: {:.2f}\n", rep.pct.co2);
    out << fmt::format("co_reduction_pct: {:.2f}\n", rep.pct.co);
    out << fmt::format("nox_reduction_pct: {:.2f}\n", rep.pct.nox);
    out << fmt::format("hc_reduction_pct: {:.2f}\n", rep.pct.hc);
    out << fmt::format("fuel_reduction_pct: {:.2f}\n", rep.pct.fuel);
}

}  // namespace platoonsim
