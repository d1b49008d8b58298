#include "manet/radio_energy.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace manet {

double distance(Position a, Position b) {
    return std::hypot(a.x - b.x, a.y - b.y);
}

bool in_range(Position a, Position b, const RadioParams& params) {
    return distance(a, b) <= params.range_m;
}

double tx_duration(int bytes, const RadioParams& params) {
    if (bytes <= 0) {
        throw std::invalid_argument("tx_duration: bytes must be > 0");
    }
    return static_cast<double>(bytes) * 8.0 / params.bandwidth_bps;
}

EnergyAccount::EnergyAccount(double initial_j, SimTime at)
    : initial_(initial_j), residual_(initial_j), last_update_(at) {
    if (!(initial_j > 0.0)) {
        throw std::invalid_argument("EnergyAccount: initial energy must be > 0");
    }
}

double EnergyAccount::settle_idle(SimTime to, const RadioParams& params) {
    if (to < last_update_) {
        throw std::logic_error("EnergyAccount::settle_idle: time went backwards");
    }
    if (!alive()) {
        last_update_ = to;
        return 0.0;
    }
    const double dt = to - last_update_;
    const double cost = params.sleep_power_w * dt;
    const double consumed = std::min(residual_, cost);
    if (consumed >= residual_ && cost > 0.0) {
        // Exact death instant, not the settlement instant.
        dead_at_ = SimTime(last_update_.seconds() + residual_ / params.sleep_power_w);
        idle_ += residual_;
        residual_ = 0.0;
    } else {
        idle_ += consumed;
        residual_ -= consumed;
    }
    last_update_ = to;
    return consumed;
}

ChargeOutcome EnergyAccount::charge(double power_w, double duration_s, SimTime now,
                                    double& sink) {
    const double cost = power_w * duration_s;
    const double consumed = std::min(residual_, cost);
    sink += consumed;
    residual_ -= consumed;
    if (!(residual_ > 0.0)) {
        residual_ = 0.0;
        if (!dead_at_) dead_at_ = now;
    }
    return ChargeOutcome{consumed, !alive()};
}

ChargeOutcome EnergyAccount::charge_tx(int bytes, const RadioParams& params, SimTime now) {
    if (!alive()) {
        throw std::logic_error("EnergyAccount::charge_tx: node is dead");
    }
    settle_idle(now, params);
    if (!alive()) return ChargeOutcome{0.0, true};
    return charge(params.tx_power_w, tx_duration(bytes, params), now, tx_);
}

ChargeOutcome EnergyAccount::charge_rx(int bytes, const RadioParams& params, SimTime now) {
    if (!alive()) {
        throw std::logic_error("EnergyAccount::charge_rx: node is dead");
    }
    settle_idle(now, params);
    if (!alive()) return ChargeOutcome{0.0, true};
    return charge(params.rx_power_w, tx_duration(bytes, params), now, rx_);
}

std::vector<NodeId> neighbors(NodeId self, const std::vector<Site>& sites,
                              const RadioParams& params) {
    Position own{};
    bool found = false;
    for (const Site& s : sites) {
        if (s.id == self) {
            own = s.pos;
            found = true;
            break;
        }
    }
    if (!found) {
        throw std::invalid_argument("neighbors: unknown node id");
    }
    std::vector<NodeId> out;
    for (const Site& s : sites) {
        if (s.id == self || !s.alive) continue;
        if (in_range(own, s.pos, params)) out.push_back(s.id);
    }
    return out;
}

}  // namespace manet
