#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>

#include "platoonsim/channel.hpp"
#include "platoonsim/platoon.hpp"
#include "platoonsim/vehicle.hpp"

namespace platoonsim {

enum class Mode { Connected, NotConnected };

const char* mode_name(Mode m);

struct BackgroundSpec {
    double spawn_prob = 0.0;
    int max_vehicles = 0;
};

struct ScenarioConfig {
    Mode mode = Mode::NotConnected;
    std::uint64_t seed = 1;
    double dt = 0.1;
    double max_sim_time = 3600.0;
    double spawn_gap_m = 10.0;  // bumper gap between vans at t = 0
    std::filesystem::path route_file;
    VehicleParams vehicle;
    PlatoonConfig platoon;
    // platoon members cap their target at the road limit when true
    bool platoon_obeys_limits = false;
    ChannelConfig channel;
    bool channel_seed_explicit = false;
    std::filesystem::path coeff_file;
    BackgroundSpec background;

    // throws std::invalid_argument
    void validate() const;
    void set_seed(std::uint64_t s);
};

class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// INI text; relative file paths resolve against base_dir
ScenarioConfig parse_config(std::istream& in, const std::filesystem::path& base_dir);
ScenarioConfig load_config(const std::filesystem::path& file);
void write_config(std::ostream& out, const ScenarioConfig& cfg);

}  // namespace platoonsim
