#include "platoonsim/channel.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace platoonsim {

void ChannelConfig::validate() const {
    if (!(interval_s > 0.0)) throw std::invalid_argument("channel interval_s must be > 0");
    if (latency_s < 0.0) throw std::invalid_argument("channel latency_s must be >= 0");
    if (loss_prob < 0.0 || loss_prob > 1.0) throw std::invalid_argument("channel loss_prob must lie in [0, 1]");
}

std::vector<Beacon> schedule_beacons(double t, const std::vector<std::size_t>& members,
                                     const std::vector<VehicleState>& states, const ChannelConfig& cfg, double dt,
                                     std::vector<std::uint64_t>& seq_counters) {
    std::vector<Beacon> out;
    double phase = std::fmod(t, cfg.interval_s);
    // t is a multiple of dt; absorb rounding that lands just below a multiple of the interval
    if (cfg.interval_s - phase < 1e-9) phase = 0.0;
    if (!(phase < dt - 1e-9)) return out;
    if (seq_counters.size() < states.size()) seq_counters.resize(states.size(), 0);
    for (auto i : members) {
        const auto& st = states[i];
        out.push_back(Beacon{i, st.s, st.v, st.a, t, ++seq_counters[i]});
    }
    return out;
}

BeaconChannel::BeaconChannel(ChannelConfig cfg) : cfg_(cfg), rng_(cfg.seed) { cfg_.validate(); }

void BeaconChannel::install(std::size_t receiver, const Beacon& b) {
    auto& slot = tables_[receiver];
    auto it = slot.find(b.sender);
    if (it == slot.end() || it->second.seq < b.seq) slot[b.sender] = b;
}

void BeaconChannel::prime(const std::vector<Beacon>& beacons, const std::vector<std::vector<std::size_t>>& groups) {
    for (const auto& b : beacons)
        for (const auto& g : groups)
            if (std::find(g.begin(), g.end(), b.sender) != g.end())
                for (auto r : g)
                    if (r != b.sender) install(r, b);
}

void BeaconChannel::release(double t) {
    auto due = std::stable_partition(pending_.begin(), pending_.end(),
                                     [t](const Pending& p) { return p.visible_at > t + 1e-9; });
    for (auto it = due; it != pending_.end(); ++it) install(it->receiver, it->beacon);
    pending_.erase(due, pending_.end());
}

std::vector<Delivery> BeaconChannel::deliver(const std::vector<Beacon>& beacons, double t,
                                             const std::vector<std::vector<std::size_t>>& groups) {
    std::vector<Delivery> log;
    for (const auto& b : beacons) {
        Delivery d{b, {}};
        for (const auto& g : groups) {
            if (std::find(g.begin(), g.end(), b.sender) == g.end()) continue;
            for (auto r : g) {
                if (r == b.sender) continue;
                if (uniform01(rng_) < 1.0 - cfg_.loss_prob) {
                    pending_.push_back({b.t_sent + cfg_.latency_s, r, b});
                    d.delivered_to.push_back(r);
                }
            }
        }
        log.push_back(std::move(d));
    }
    release(t);
    return log;
}

const Beacon* BeaconChannel::latest(std::size_t receiver, std::size_t sender) const {
    auto r = tables_.find(receiver);
    if (r == tables_.end()) return nullptr;
    auto s = r->second.find(sender);
    return s == r->second.end() ? nullptr : &s->second;
}

bool BeaconChannel::fresh(const Beacon* b, double t) const {
    return b != nullptr && t - b->t_sent <= kStalenessIntervals * cfg_.interval_s + 1e-9;
}

}  // namespace platoonsim
