#include "manet/essdsr.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace manet {

bool EnergyJitterParams::consistent() const {
    if (!(scale_per_joule_s > 0.0) || !(max_delay_s > 0.0) || !(min_energy_j > 0.0)) {
        return false;
    }
    return std::abs(1.0 / (scale_per_joule_s * min_energy_j) - max_delay_s) <= 1e-12;
}

double energy_jitter(double residual_j, const EnergyJitterParams& params) {
    if (!(residual_j > 0.0)) {
        throw std::logic_error("energy_jitter: residual must be > 0");
    }
    return std::min(params.max_delay_s, 1.0 / (params.scale_per_joule_s * residual_j));
}

bool check_low_energy(const EnergyAccount& acct, const LowEnergyThreshold& threshold) {
    return acct.residual_j() <= threshold.fraction * acct.initial_j();
}

}  // namespace manet
