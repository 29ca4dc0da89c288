#include "platoonsim/calibrate.hpp"

#include <cmath>
#include <limits>

namespace platoonsim {

double mean_travel_time(const ScenarioResult& r) {
    if (r.vehicles.empty() || !r.finished()) return std::numeric_limits<double>::infinity();
    double sum = 0.0;
    for (const auto& v : r.vehicles) sum += *v.travel_time_s;
    return sum / static_cast<double>(r.vehicles.size());
}

Route shift_signal_offsets(const Route& route, double shift_s) {
    Route out = route;
    for (auto& s : out.signals) s.offset_s = std::fmod(s.offset_s + shift_s, s.cycle_s);
    return out;
}

CalibrationResult calibrate(ScenarioConfig cfg, const Route& route, const EmissionCoeffs& coeffs, double target_s,
                            double tol_frac, double search_frac, int iterations, double shift_step_s) {
    cfg.mode = Mode::NotConnected;
    RunOptions opts;
    opts.record_steps = false;

    CalibrationResult best;
    double best_err = std::numeric_limits<double>::infinity();

    auto probe = [&](const Route& r, double shift, double sigma) {
        cfg.vehicle.sigma = sigma;
        const double tt = mean_travel_time(run(cfg, r, coeffs, opts));
        best.probes.push_back({sigma, shift, tt});
        const double err = std::abs(tt - target_s);
        if (err < best_err) {
            best_err = err;
            best.sigma = sigma;
            best.offset_shift_s = shift;
            best.travel_time_s = tt;
        }
        return tt;
    };

    double max_cycle = 0.0;
    for (const auto& s : route.signals) max_cycle = std::max(max_cycle, s.cycle_s);
    const double aim = search_frac * target_s;

    const double sigma0 = cfg.vehicle.sigma;
    for (double shift = 0.0;; shift += shift_step_s) {
        const Route r = shift == 0.0 ? route : shift_signal_offsets(route, shift);
        probe(r, shift, sigma0);
        if (best_err <= aim) break;
        double lo = 0.0;
        double hi = 1.0;
        const double f_lo = probe(r, shift, lo);
        const double f_hi = probe(r, shift, hi);
        if ((f_lo - target_s) * (f_hi - target_s) < 0.0) {
            for (int it = 0; it < iterations && best_err > aim; ++it) {
                const double mid = 0.5 * (lo + hi);
                const double f = probe(r, shift, mid);
                if ((f - target_s) * (f_lo - target_s) > 0.0)
                    lo = mid;
                else
                    hi = mid;
            }
        }
        if (best_err <= aim || shift_step_s <= 0.0 || shift + shift_step_s >= max_cycle) break;
    }
    best.within_tolerance = best_err <= tol_frac * target_s;
    return best;
}

}  // namespace platoonsim
