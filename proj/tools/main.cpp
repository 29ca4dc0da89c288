#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "platoonsim/calibrate.hpp"
#include "platoonsim/config.hpp"
#include "platoonsim/road.hpp"
#include "platoonsim/scenario.hpp"
#include "platoonsim/trace.hpp"

namespace fs = std::filesystem;
using namespace platoonsim;

namespace {

constexpr const char* kVersion = "1.0.0";

struct MissingFile {
    fs::path path;
};

void require_file(const fs::path& p) {
    if (!fs::is_regular_file(p)) throw MissingFile{p};
}

std::ofstream open_out(const fs::path& p) {
    if (p.has_parent_path()) fs::create_directories(p.parent_path());
    std::ofstream out(p, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + p.string());
    return out;
}

int cmd_ingest(const fs::path& trace_file, const fs::path& out_route, double epsilon, double max_jump) {
    require_file(trace_file);
    std::ifstream in(trace_file);
    auto parsed = parse_trace(in);
    for (const auto& e : parsed.errors) std::cerr << fmt::format("rejected line {}: {}: {}\n", e.line, e.field, e.reason);
    const TripTrace cleaned = clean_trace(parsed.trace, max_jump);
    const std::size_t dropped = parsed.trace.rows.size() - cleaned.rows.size();
    if (dropped) std::cerr << fmt::format("removed {} implausible fixes (max_jump {} m)\n", dropped, max_jump);
    for (const auto& [a, b] : cleaned.gaps)
        std::cerr << fmt::format("time gap between lines {} and {}\n", cleaned.rows[a].line, cleaned.rows[b].line);
    const Route route = route_from_trace(cleaned, epsilon);
    auto out = open_out(out_route);
    out << fmt::format("# ingested from {}, epsilon {} m\n", trace_file.filename().string(), epsilon);
    write_route(out, route);
    std::cout << fmt::format("route {} length_m {:.1f} points {} segments {}\n", out_route.string(), route.length_m,
                             route.points.size(), route.segments.size());
    return 0;
}

int cmd_run(const fs::path& cfg_file, const fs::path& out_dir, std::optional<std::uint64_t> seed, bool beacon_log) {
    require_file(cfg_file);
    ScenarioConfig cfg = load_config(cfg_file);
    if (seed) cfg.set_seed(*seed);
    require_file(cfg.route_file);
    require_file(coeff_path(cfg));

    const fs::path dir = out_dir / mode_name(cfg.mode);
    fs::create_directories(dir);
    auto steps = open_out(dir / "steps.csv");
    std::ofstream beacons;
    RunOptions opts;
    opts.record_steps = false;
    opts.step_csv = &steps;
    if (beacon_log) {
        beacons = open_out(dir / "beacons.csv");
        opts.beacon_csv = &beacons;
    }
    const ScenarioResult res = run(cfg, opts);
    auto summary = open_out(dir / "summary.csv");
    write_summary_csv(summary, res);

    std::cout << (dir / "summary.csv").string() << '\n';
    std::cout << fmt::format("mode: {}\ncoefficient_class: {}\n", mode_name(res.mode), res.coeff_class);
    for (const auto& v : res.vehicles) {
        const double tt = v.travel_time_s.value_or(0.0);
        std::cout << fmt::format("{} travel_time_s: {} co2_mean_mgps: {:.2f} fuel_ml: {:.1f}\n", v.id,
                                 v.travel_time_s ? fmt::format("{:.2f}", tt) : "unfinished",
                                 tt > 0 ? v.totals.total(Quantity::CO2) / tt : 0.0, v.totals.total(Quantity::Fuel));
    }
    std::cout << fmt::format("background spawned {} finished {} running {}\n", res.background_spawned,
                             res.background_finished, res.background_running);
    if (!res.finished()) {
        for (const auto& id : res.unfinished) std::cerr << "Unfinished(" << id << ")\n";
        return 1;
    }
    return 0;
}

int cmd_compare(const fs::path& a_dir, const fs::path& b_dir, const std::optional<fs::path>& out_report) {
    require_file(a_dir / "summary.csv");
    require_file(b_dir / "summary.csv");
    std::ifstream ain(a_dir / "summary.csv");
    std::ifstream bin(b_dir / "summary.csv");
    const auto a = read_summary_csv(ain);
    const auto b = read_summary_csv(bin);
    const auto rep = compare(a, b);
    write_report(std::cout, rep);
    if (out_report) {
        auto out = open_out(*out_report);
        write_report(out, rep);
    }
    return 0;
}

int cmd_calibrate(const fs::path& cfg_file, double target, const fs::path& out_cfg, std::optional<std::uint64_t> seed) {
    require_file(cfg_file);
    ScenarioConfig cfg = load_config(cfg_file);
    if (seed) cfg.set_seed(*seed);
    require_file(cfg.route_file);
    require_file(coeff_path(cfg));
    const Route route = load_route_file(cfg.route_file);
    const EmissionCoeffs coeffs = load_coeffs_file(coeff_path(cfg));

    const CalibrationResult cal = calibrate(cfg, route, coeffs, target);
    for (const auto& p : cal.probes)
        std::cout << fmt::format("probe sigma {:.6f} offset_shift_s {} travel_time_s {:.2f}\n", p.sigma, p.offset_shift_s,
                                 p.travel_time_s);

    cfg.vehicle.sigma = cal.sigma;
    if (cal.offset_shift_s != 0.0) {
        const fs::path rt = out_cfg.parent_path() / (out_cfg.stem().string() + ".rt");
        auto out = open_out(rt);
        out << fmt::format("# signal offsets shifted by {} s during calibration\n", cal.offset_shift_s);
        write_route(out, shift_signal_offsets(route, cal.offset_shift_s));
        cfg.route_file = fs::absolute(rt);
    } else {
        cfg.route_file = fs::absolute(cfg.route_file);
    }
    cfg.coeff_file = fs::absolute(cfg.coeff_file);
    auto out = open_out(out_cfg);
    write_config(out, cfg);
    std::cout << fmt::format("sigma: {:.6f}\noffset_shift_s: {}\ntravel_time_s: {:.2f}\ntarget_s: {}\nwithin_2pct: {}\n",
                             cal.sigma, cal.offset_shift_s, cal.travel_time_s, target, cal.within_tolerance);
    return cal.within_tolerance ? 0 : 1;
}

std::string version_text() {
    std::string cls = "unknown";
    fs::path coeffs = fs::path(PLATOONSIM_DATA_DIR) / "ldv_d_eu6.coef";
    if (const char* env = std::getenv("PLATOONSIM_COEFFS"); env && *env) coeffs = env;
    try {
        cls = load_coeffs_file(coeffs).class_name;
    } catch (const std::exception&) {
    }
    return fmt::format("platoonsim {}\ncoefficient class: {}", kVersion, cls);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Delivery-van platooning simulator: travel time, emissions and fuel, connected vs not connected"};
    app.require_subcommand(1);
    app.set_version_flag("--version", version_text());

    fs::path trace_file, out_route;
    double epsilon = 5.0, max_jump = 60.0;
    auto* ingest = app.add_subcommand("ingest", "GPS trip log to route file");
    ingest->add_option("trace", trace_file, "trip CSV")->required();
    ingest->add_option("-o,--out", out_route, "route file to write")->required();
    ingest->add_option("--epsilon", epsilon, "simplification tolerance, m");
    ingest->add_option("--max-jump", max_jump, "largest plausible displacement per second, m");

    fs::path cfg_file, out_dir = "out";
    std::optional<std::uint64_t> seed;
    bool beacon_log = false;
    auto* runc = app.add_subcommand("run", "run one scenario; writes <out>/<mode>/{steps,summary}.csv");
    runc->add_option("config", cfg_file, "scenario config")->required();
    runc->add_option("-o,--out", out_dir, "output directory");
    runc->add_option("--seed", seed, "override the config seed");
    runc->add_flag("--beacon-log", beacon_log, "also write beacons.csv (Connected)");

    fs::path a_dir, b_dir;
    std::optional<fs::path> report;
    auto* cmp = app.add_subcommand("compare", "reductions of result A relative to baseline B");
    cmp->add_option("result_a", a_dir, "result directory (e.g. out/Connected)")->required();
    cmp->add_option("result_b", b_dir, "baseline result directory (e.g. out/NotConnected)")->required();
    cmp->add_option("-o,--out", report, "report file to write");

    fs::path cal_cfg, cal_out;
    double target = 1385.0;
    auto* cal = app.add_subcommand("calibrate", "fit sigma and a signal-offset shift so NotConnected hits the target travel time");
    cal->add_option("config", cal_cfg, "scenario config")->required();
    cal->add_option("--target", target, "target mean van travel time, s");
    cal->add_option("-o,--out", cal_out, "calibrated config to write")->required();
    cal->add_option("--seed", seed, "override the config seed");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << "error: " << e.what() << "\n\n" << app.help();
        return 2;
    }

    try {
        if (*ingest) return cmd_ingest(trace_file, out_route, epsilon, max_jump);
        if (*runc) return cmd_run(cfg_file, out_dir, seed, beacon_log);
        if (*cmp) return cmd_compare(a_dir, b_dir, report);
        if (*cal) return cmd_calibrate(cal_cfg, target, cal_out, seed);
    } catch (const MissingFile& m) {
        std::cerr << "error: no such file: " << m.path.string() << '\n';
        return 1;
    } catch (const fs::filesystem_error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
