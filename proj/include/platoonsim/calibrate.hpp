#pragma once

#include <vector>

#include "platoonsim/scenario.hpp"

namespace platoonsim {

struct CalibrationResult {
    double sigma = 0.0;
    double offset_shift_s = 0.0;  // added to every signal offset
    double travel_time_s = 0.0;   // mean over vans at the chosen point
    bool within_tolerance = false;
    struct Probe {
        double sigma;
        double offset_shift_s;
        double travel_time_s;
    };
    std::vector<Probe> probes;  // evaluation order
};

double mean_travel_time(const ScenarioResult& r);

Route shift_signal_offsets(const Route& route, double shift_s);

// NotConnected mean van travel time against target_s. The configured sigma
// is probed first; unless it lands within search_frac of the target, sigma is
// bisected on [0, 1], then common signal-offset shifts of shift_step_s are
// tried in turn with a fresh bisection each. The closest probe wins;
// within_tolerance reports |error| <= tol_frac * target.
CalibrationResult calibrate(ScenarioConfig cfg, const Route& route, const EmissionCoeffs& coeffs, double target_s,
                            double tol_frac = 0.02, double search_frac = 0.005, int iterations = 12,
                            double shift_step_s = 5.0);

}  // namespace platoonsim
