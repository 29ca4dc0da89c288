#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "platoonsim/config.hpp"
#include "platoonsim/emissions.hpp"
#include "platoonsim/road.hpp"

namespace platoonsim {

struct Spawn {
    int id = 0;
    std::string type;
    std::size_t depart_step = 0;
    std::string route;
};

// One draw of Lcg64(seed) per step; a vehicle with the next sequential id
// spawns when the draw is below spawn_prob. Types are assigned round-robin.
std::vector<Spawn> generate_demand(std::uint64_t seed, std::size_t n_steps, double spawn_prob,
                                   const std::vector<std::string>& types, const std::string& route = "corridor");

struct StepRow {
    double t = 0.0;
    std::size_t van = 0;  // index into ScenarioResult::vehicles
    double s = 0.0;
    double v = 0.0;
    double a = 0.0;
    EmissionRecord rates;
    std::optional<double> gap;  // bumper gap to the vehicle ahead
    bool degraded = false;
};

struct VehicleResult {
    std::string id;
    std::string role;
    std::optional<double> travel_time_s;  // empty when unfinished
    EmissionTotals totals;                // over the origin-to-destination window
    std::optional<double> t_origin;
    std::optional<double> t_destination;
};

struct ScenarioResult {
    Mode mode = Mode::NotConnected;
    std::string coeff_class;
    double dt = 0.1;
    double sim_time = 0.0;
    std::vector<VehicleResult> vehicles;  // vans only, front to back
    std::vector<StepRow> steps;           // vans only, when recording
    std::vector<std::string> unfinished;

    std::size_t background_spawned = 0;
    std::size_t background_finished = 0;
    std::size_t background_running = 0;
    std::size_t background_pending = 0;  // scheduled but not yet inserted at termination

    double min_gap_m = 0.0;  // smallest bumper gap seen between consecutive vehicles
    std::size_t degraded_steps = 0;

    bool finished() const { return unfinished.empty(); }
};

struct RunOptions {
    bool record_steps = true;
    std::ostream* step_csv = nullptr;
    std::ostream* beacon_csv = nullptr;
};

ScenarioResult run(const ScenarioConfig& cfg, const Route& route, const EmissionCoeffs& coeffs,
                   const RunOptions& opts = {});

// loads route and coefficients named by the config; PLATOONSIM_COEFFS overrides the coefficient path
ScenarioResult run(const ScenarioConfig& cfg, const RunOptions& opts = {});

class RefusesComparison : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct Reductions {
    double travel_time = 0.0;
    double co2 = 0.0;
    double co = 0.0;
    double nox = 0.0;
    double hc = 0.0;
    double fuel = 0.0;
};

struct ComparisonReport {
    Reductions pct;
    double travel_time_a = 0.0;  // summed over vans
    double travel_time_b = 0.0;
    EmissionTotals totals_a;
    EmissionTotals totals_b;
    std::vector<VehicleResult> vehicles_a;
    std::vector<VehicleResult> vehicles_b;
};

// reductions of a relative to baseline b: (b - a) / b * 100 on summed metrics
ComparisonReport compare(const ScenarioResult& a, const ScenarioResult& b);

inline const char* kStepCsvHeader = "t,veh_id,role,s_m,v_mps,a_mps2,co2_mgps,co_mgps,nox_mgps,hc_mgps,fuel_mlps,gap_m,degraded";
inline const char* kSummaryCsvHeader = "veh_id,role,travel_time_s,co2_cum,co_cum,nox_cum,hc_cum,fuel_cum";
inline const char* kBeaconCsvHeader = "t,sender,seq,s,v,a,delivered_to";

void write_summary_csv(std::ostream& out, const ScenarioResult& r);
// reads a summary written by write_summary_csv; throws std::runtime_error on malformed input
ScenarioResult read_summary_csv(std::istream& in, double dt = 0.1);
void write_report(std::ostream& out, const ComparisonReport& rep);

Route load_route_file(const std::filesystem::path& file);
EmissionCoeffs load_coeffs_file(const std::filesystem::path& file);
std::filesystem::path coeff_path(const ScenarioConfig& cfg);

}  // namespace platoonsim
