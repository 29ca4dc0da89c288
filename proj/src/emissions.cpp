#include "platoonsim/emissions.hpp"

#include <algorithm>
#include <istream>
#include <sstream>

#include <boost/algorithm/string/predicate.hpp>

namespace platoonsim {

const char* quantity_name(Quantity q) {
    switch (q) {
        case Quantity::CO2: return "CO2";
        case Quantity::CO: return "CO";
        case Quantity::NOx: return "NOx";
        case Quantity::HC: return "HC";
        case Quantity::Fuel: return "fuel";
    }
    return "?";
}

Quantity parse_quantity(const std::string& name) {
    for (auto q : kQuantities)
        if (boost::algorithm::iequals(name, quantity_name(q))) return q;
    throw UnknownQuantity(name);
}

EmissionCoeffs read_coeffs(std::istream& in) {
    EmissionCoeffs out;
    std::array<bool, 5> seen{};
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (auto h = line.find('#'); h != std::string::npos) line.erase(h);
        std::istringstream ls(line);
        std::string kw;
        if (!(ls >> kw)) continue;
        if (kw == "class") {
            ls >> out.class_name;
            continue;
        }
        const Quantity q = parse_quantity(kw);
        auto& row = out.c[static_cast<int>(q)];
        for (auto& x : row) ls >> x;
        if (ls.fail()) throw std::runtime_error("coefficient line " + std::to_string(lineno) + ": need six numbers");
        seen[static_cast<int>(q)] = true;
    }
    if (out.class_name.empty()) throw std::runtime_error("coefficient file lacks a 'class' line");
    for (auto q : kQuantities)
        if (!seen[static_cast<int>(q)])
            throw std::runtime_error(std::string("coefficient file lacks quantity ") + quantity_name(q));
    return out;
}

double rate(Quantity q, double v, double a, const EmissionCoeffs& coeffs) {
    const auto& c = coeffs.of(q);
    const double p = c[0] + c[1] * v * a + c[2] * v * a * a + c[3] * v + c[4] * v * v + c[5] * v * v * v;
    return std::max(0.0, p);
}

double rate(const std::string& q, double v, double a, const EmissionCoeffs& coeffs) {
    return rate(parse_quantity(q), v, a, coeffs);
}

EmissionRecord step_emissions(const VehicleState& state, const EmissionCoeffs& coeffs, double t) {
    return {t,
            state.id,
            rate(Quantity::CO2, state.v, state.a, coeffs),
            rate(Quantity::CO, state.v, state.a, coeffs),
            rate(Quantity::NOx, state.v, state.a, coeffs),
            rate(Quantity::HC, state.v, state.a, coeffs),
            rate(Quantity::Fuel, state.v, state.a, coeffs)};
}

void EmissionTotals::add(const EmissionRecord& r) {
    rate_sum[0] += r.co2;
    rate_sum[1] += r.co;
    rate_sum[2] += r.nox;
    rate_sum[3] += r.hc;
    rate_sum[4] += r.fuel;
    ++steps;
}

double EmissionTotals::mean_rate(Quantity q) const {
    return steps == 0 ? 0.0 : rate_sum[static_cast<int>(q)] / static_cast<double>(steps);
}

EmissionTotals& EmissionTotals::operator+=(const EmissionTotals& o) {
    for (std::size_t i = 0; i < rate_sum.size(); ++i) rate_sum[i] += o.rate_sum[i];
    steps += o.steps;
    if (dt == 0.0) dt = o.dt;
    return *this;
}

EmissionTotals accumulate(const std::vector<EmissionRecord>& records, double dt) {
    EmissionTotals t;
    t.dt = dt;
    for (const auto& r : records) t.add(r);
    return t;
}

double fuel_carbon_check(const EmissionTotals& totals) {
    const double fuel = totals.total(Quantity::Fuel);
    if (fuel == 0.0) throw UndefinedRatio();
    return totals.total(Quantity::CO2) / fuel;
}

}  // namespace platoonsim
