#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <vector>

#include "platoonsim/rng.hpp"
#include "platoonsim/vehicle.hpp"

namespace platoonsim {

struct Beacon {
    std::size_t sender = 0;  // vehicle index in the scenario
    double s = 0.0;
    double v = 0.0;
    double a = 0.0;
    double t_sent = 0.0;
    std::uint64_t seq = 0;
};

struct ChannelConfig {
    double interval_s = 0.1;
    double latency_s = 0.0;
    double loss_prob = 0.0;
    std::uint64_t seed = 1;

    void validate() const;
};

inline constexpr double kStalenessIntervals = 3.0;

// Beacons due at t, in member order. seq_counters is indexed like members and
// holds the last sequence number used per sender.
std::vector<Beacon> schedule_beacons(double t, const std::vector<std::size_t>& members,
                                     const std::vector<VehicleState>& states, const ChannelConfig& cfg, double dt,
                                     std::vector<std::uint64_t>& seq_counters);

struct Delivery {
    Beacon beacon;
    std::vector<std::size_t> delivered_to;
};

// Per-receiver table of the newest visible beacon per sender.
class BeaconChannel {
public:
    explicit BeaconChannel(ChannelConfig cfg);

    // installs a lossless beacon from every member to every other member of its group
    void prime(const std::vector<Beacon>& beacons, const std::vector<std::vector<std::size_t>>& groups);

    // One uniform draw per (beacon, receiver) pair in beacon-then-receiver
    // order; delivered iff draw < 1 - loss_prob. Receivers are the other
    // members of the sender's group.
    std::vector<Delivery> deliver(const std::vector<Beacon>& beacons, double t,
                                  const std::vector<std::vector<std::size_t>>& groups);

    const Beacon* latest(std::size_t receiver, std::size_t sender) const;
    bool fresh(const Beacon* b, double t) const;
    const ChannelConfig& config() const { return cfg_; }

private:
    struct Pending {
        double visible_at;
        std::size_t receiver;
        Beacon beacon;
    };
    void install(std::size_t receiver, const Beacon& b);
    void release(double t);

    ChannelConfig cfg_;
    Lcg64 rng_;
    std::vector<Pending> pending_;
    std::map<std::size_t, std::map<std::size_t, Beacon>> tables_;
};

}  // namespace platoonsim
