#pragma once

#include <optional>
#include <vector>

#include "manet/sim_core.hpp"
#include "manet/types.hpp"

namespace manet {

struct Position {
    double x = 0.0;
    double y = 0.0;
};

double distance(Position a, Position b);

/// Radio profile. Defaults: 1.43 W tx, 0.925 W rx, 0.045 W sleep, 250 m range,
/// 2 Mb/s link rate.
struct RadioParams {
    double tx_power_w = 1.43;
    double rx_power_w = 0.925;
    double sleep_power_w = 0.045;
    double range_m = 250.0;
    double bandwidth_bps = 2.0e6;
};

/// Disc connectivity: true iff the euclidean distance is within range
/// (boundary inclusive). Symmetric by construction.
bool in_range(Position a, Position b, const RadioParams& params);

/// Airtime of a frame: bytes * 8 / bandwidth. Rejects non-positive sizes.
double tx_duration(int bytes, const RadioParams& params);

struct ChargeOutcome {
    double joules = 0.0;
    bool exhausted = false;  // the charge drained the account to zero
};

/// Battery account for one node. Idle drain is settled lazily; tx/rx charges
/// are instantaneous at their event time. Consumed energy is tracked per sink
/// so initial - residual always equals tx + rx + idle up to summation
/// round-off.
class EnergyAccount {
public:
    EnergyAccount() = default;
    EnergyAccount(double initial_j, SimTime at);

    double initial_j() const { return initial_; }
    double residual_j() const { return residual_; }
    double tx_total_j() const { return tx_; }
    double rx_total_j() const { return rx_; }
    double idle_total_j() const { return idle_; }
    SimTime last_update() const { return last_update_; }

    bool alive() const { return residual_ > 0.0; }
    std::optional<SimTime> dead_since() const { return dead_at_; }

    /// Charges sleep-power drain for [last_update, to]. If the account runs
    /// out mid-interval the death instant is last_update + residual/sleep.
    double settle_idle(SimTime to, const RadioParams& params);

    /// Transmit charge for one frame. Throws if the node is already dead.
    /// Settles idle drain first; a charge that hits zero marks the
    /// transmission failed.
    ChargeOutcome charge_tx(int bytes, const RadioParams& params, SimTime now);

    /// Receive charge; same contract as charge_tx with rx power.
    ChargeOutcome charge_rx(int bytes, const RadioParams& params, SimTime now);

private:
    ChargeOutcome charge(double power_w, double duration_s, SimTime now, double& sink);

    double initial_ = 0.0;
    double residual_ = 0.0;
    double tx_ = 0.0;
    double rx_ = 0.0;
    double idle_ = 0.0;
    SimTime last_update_{};
    std::optional<SimTime> dead_at_;
};

struct Site {
    NodeId id = 0;
    Position pos;
    bool alive = true;
};

/// Alive nodes other than `self` within radio range.
std::vector<NodeId> neighbors(NodeId self, const std::vector<Site>& sites,
                              const RadioParams& params);

}  // namespace manet
