#pragma once

#include <array>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include "platoonsim/vehicle.hpp"

namespace platoonsim {

enum class Quantity { CO2 = 0, CO, NOx, HC, Fuel };

inline constexpr std::array<Quantity, 5> kQuantities{Quantity::CO2, Quantity::CO, Quantity::NOx, Quantity::HC,
                                                     Quantity::Fuel};

const char* quantity_name(Quantity q);

class UnknownQuantity : public std::invalid_argument {
public:
    explicit UnknownQuantity(const std::string& q) : std::invalid_argument("unknown emission quantity: " + q) {}
};

class UndefinedRatio : public std::domain_error {
public:
    UndefinedRatio() : std::domain_error("fuel total is zero; CO2/fuel ratio undefined") {}
};

Quantity parse_quantity(const std::string& name);

struct EmissionCoeffs {
    std::string class_name;
    // c0..c5 per quantity; pollutants in mg/s, fuel in ml/s
    std::array<std::array<double, 6>, 5> c{};

    const std::array<double, 6>& of(Quantity q) const { return c[static_cast<int>(q)]; }
};

// "class <name>" then "<quantity> c0 c1 c2 c3 c4 c5" lines; '#' comments.
// Throws std::runtime_error unless all five quantities are present.
EmissionCoeffs read_coeffs(std::istream& in);

double rate(Quantity q, double v, double a, const EmissionCoeffs& coeffs);
double rate(const std::string& q, double v, double a, const EmissionCoeffs& coeffs);

struct EmissionRecord {
    double t = 0.0;
    std::string vehicle_id;
    double co2 = 0.0;
    double co = 0.0;
    double nox = 0.0;
    double hc = 0.0;
    double fuel = 0.0;
};

EmissionRecord step_emissions(const VehicleState& state, const EmissionCoeffs& coeffs, double t = 0.0);

// Per-vehicle fold of step records. rate_sum holds the summed per-step rates;
// the integrated total of a quantity is rate_sum * dt (mg, fuel in ml).
struct EmissionTotals {
    std::array<double, 5> rate_sum{};
    std::size_t steps = 0;
    double dt = 0.0;

    void add(const EmissionRecord& r);
    double total(Quantity q) const { return rate_sum[static_cast<int>(q)] * dt; }
    // average rate over the accumulated steps (mg/s, fuel ml/s)
    double mean_rate(Quantity q) const;
    EmissionTotals& operator+=(const EmissionTotals& o);
};

EmissionTotals accumulate(const std::vector<EmissionRecord>& records, double dt);

double fuel_carbon_check(const EmissionTotals& totals);

}  // namespace platoonsim
