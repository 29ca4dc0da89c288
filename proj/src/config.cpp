#include "platoonsim/config.hpp"

#include <fstream>
#include <istream>
#include <ostream>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <fmt/format.h>

namespace platoonsim {

namespace pt = boost::property_tree;

const char* mode_name(Mode m) { return m == Mode::Connected ? "Connected" : "NotConnected"; }

void ScenarioConfig::validate() const {
    if (!(dt > 0.0)) throw std::invalid_argument("dt must be > 0");
    if (!(max_sim_time > 0.0)) throw std::invalid_argument("max_sim_time must be > 0");
    if (spawn_gap_m < 0.0) throw std::invalid_argument("spawn_gap_m must be >= 0");
    if (background.spawn_prob < 0.0 || background.spawn_prob > 1.0)
        throw std::invalid_argument("background spawn_prob must lie in [0, 1]");
    if (background.max_vehicles < 0) throw std::invalid_argument("background max_vehicles must be >= 0");
    vehicle.validate();
    platoon.validate();
    channel.validate();
}

void ScenarioConfig::set_seed(std::uint64_t s) {
    seed = s;
    if (!channel_seed_explicit) channel.seed = s;
}

namespace {

template <class T>
void get(const pt::ptree& tree, const char* key, T& out) {
    try {
        if (tree.get_optional<std::string>(key)) out = tree.get<T>(key);
    } catch (const pt::ptree_bad_data&) {
        throw ConfigError(std::string("config key ") + key + ": bad value '" + tree.get<std::string>(key) + "'");
    }
}

std::filesystem::path resolve(const std::filesystem::path& base, const std::string& p) {
    std::filesystem::path path(p);
    return path.is_absolute() ? path : base / path;
}

}  // namespace

ScenarioConfig parse_config(std::istream& in, const std::filesystem::path& base_dir) {
    pt::ptree tree;
    try {
        pt::read_ini(in, tree);
    } catch (const pt::ini_parser_error& e) {
        throw ConfigError(e.what());
    }
    ScenarioConfig c;

    std::string mode = tree.get<std::string>("scenario.mode", "NotConnected");
    if (mode == "Connected" || mode == "connected")
        c.mode = Mode::Connected;
    else if (mode == "NotConnected" || mode == "notconnected" || mode == "not_connected")
        c.mode = Mode::NotConnected;
    else
        throw ConfigError("scenario.mode must be Connected or NotConnected, got '" + mode + "'");
    get(tree, "scenario.seed", c.seed);
    get(tree, "scenario.dt", c.dt);
    get(tree, "scenario.max_sim_time", c.max_sim_time);
    get(tree, "scenario.spawn_gap_m", c.spawn_gap_m);

    auto route = tree.get_optional<std::string>("route.file");
    if (!route) throw ConfigError("config lacks [route] file");
    c.route_file = resolve(base_dir, *route);

    auto& v = c.vehicle;
    get(tree, "vehicle.length", v.length);
    get(tree, "vehicle.mass", v.mass);
    get(tree, "vehicle.v_max", v.v_max);
    get(tree, "vehicle.v_min", v.v_min);
    get(tree, "vehicle.a_max", v.a_max);
    get(tree, "vehicle.b_comf", v.b_comf);
    get(tree, "vehicle.b_emergency", v.b_emergency);
    get(tree, "vehicle.tau", v.tau);
    get(tree, "vehicle.sigma", v.sigma);
    get(tree, "vehicle.min_gap", v.min_gap);

    auto& p = c.platoon;
    get(tree, "platoon.gap_des", p.gap_des);
    get(tree, "platoon.n_cars", p.n_cars);
    get(tree, "platoon.platoon_size", p.platoon_size);
    get(tree, "platoon.c1", p.c1);
    get(tree, "platoon.xi", p.xi);
    get(tree, "platoon.omega_n", p.omega_n);
    get(tree, "platoon.osc_freq", p.osc_freq);
    get(tree, "platoon.osc_amp", p.osc_amp);
    get(tree, "platoon.v_cruise", p.v_cruise);
    get(tree, "platoon.leader_gain", p.leader_gain);
    get(tree, "platoon.leader_accel_frac", p.leader_accel_frac);
    get(tree, "platoon.obey_limits", c.platoon_obeys_limits);

    get(tree, "channel.interval_s", c.channel.interval_s);
    get(tree, "channel.latency_s", c.channel.latency_s);
    get(tree, "channel.loss_prob", c.channel.loss_prob);
    c.channel.seed = c.seed;
    if (tree.get_optional<std::string>("channel.seed")) {
        get(tree, "channel.seed", c.channel.seed);
        c.channel_seed_explicit = true;
    }

    auto coeff = tree.get_optional<std::string>("emissions.coeff_file");
    if (!coeff) throw ConfigError("config lacks [emissions] coeff_file");
    c.coeff_file = resolve(base_dir, *coeff);

    get(tree, "background.spawn_prob", c.background.spawn_prob);
    get(tree, "background.max_vehicles", c.background.max_vehicles);

    try {
        c.validate();
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }
    return c;
}

ScenarioConfig load_config(const std::filesystem::path& file) {
    std::ifstream in(file);
    if (!in) throw std::filesystem::filesystem_error("cannot open config", file, std::make_error_code(std::errc::no_such_file_or_directory));
    return parse_config(in, file.parent_path());
}

void write_config(std::ostream& out, const ScenarioConfig& c) {
    const auto& v = c.vehicle;
    const auto& p = c.platoon;
    out << "[scenario]\n"
        << fmt::format("mode = {}\nseed = {}\ndt = {}\nmax_sim_time = {}\nspawn_gap_m = {}\n\n", mode_name(c.mode),
                       c.seed, c.dt, c.max_sim_time, c.spawn_gap_m)
        << "[route]\n"
        << fmt::format("file = {}\n\n", c.route_file.string()) << "[vehicle]\n"
        << fmt::format("length = {}\nmass = {}\nv_max = {}\nv_min = {}\na_max = {}\nb_comf = {}\nb_emergency = {}\n"
                       "tau = {}\nsigma = {}\nmin_gap = {}\n\n",
                       v.length, v.mass, v.v_max, v.v_min, v.a_max, v.b_comf, v.b_emergency, v.tau, v.sigma,
                       v.min_gap)
        << "[platoon]\n"
        << fmt::format("gap_des = {}\nn_cars = {}\nplatoon_size = {}\nc1 = {}\nxi = {}\nomega_n = {}\nosc_freq = {}\n"
                       "osc_amp = {}\nv_cruise = {}\nleader_gain = {}\nleader_accel_frac = {}\nobey_limits = {}\n\n",
                       p.gap_des, p.n_cars, p.platoon_size, p.c1, p.xi, p.omega_n, p.osc_freq, p.osc_amp, p.v_cruise,
                       p.leader_gain, p.leader_accel_frac, c.platoon_obeys_limits)
        << "[channel]\n"
        << fmt::format("interval_s = {}\nlatency_s = {}\nloss_prob = {}\n", c.channel.interval_s, c.channel.latency_s,
                       c.channel.loss_prob);
    if (c.channel_seed_explicit) out << fmt::format("seed = {}\n", c.channel.seed);
    out << "\n[emissions]\n"
        << fmt::format("coeff_file = {}\n\n", c.coeff_file.string()) << "[background]\n"
        << fmt::format("spawn_prob = {}\nmax_vehicles = {}\n", c.background.spawn_prob, c.background.max_vehicles);
}

}  // namespace platoonsim
