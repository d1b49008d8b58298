#pragma once

#include "manet/radio_energy.hpp"

namespace manet {

/// Constants of the energy-proportional control delay d = 1/(scale * E),
/// clamped at max_delay once the residual falls to min_energy. The three
/// values must satisfy 1/(scale * min_energy) == max_delay.
struct EnergyJitterParams {
    double scale_per_joule_s = 100.0;
    double max_delay_s = 0.01;
    double min_energy_j = 1.0;

    bool consistent() const;
};

/// Fraction of the initial energy at which a node announces itself weak.
struct LowEnergyThreshold {
    double fraction = 0.2;
};

/// Forwarding delay for a control packet held by a node with the given
/// residual energy: min(max_delay, 1/(scale * residual)). Strictly decreasing
/// above min_energy, pinned at max_delay at or below it. Dead nodes do not
/// forward, so residual must be positive.
double energy_jitter(double residual_j, const EnergyJitterParams& params);

/// True once the residual is at or below fraction * initial.
bool check_low_energy(const EnergyAccount& acct, const LowEnergyThreshold& threshold);

}  // namespace manet
