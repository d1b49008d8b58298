#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "manet/scenario.hpp"
#include "manet/traffic_metrics.hpp"
#include "manet/types.hpp"

namespace manet {

/// End-of-run summary. Regenerating with the same scenario and seed yields an
/// identical report, byte for byte once serialized.
struct RunReport {
    std::string scenario_name;
    std::string scenario_digest;
    Protocol protocol = Protocol::dsr;
    std::uint64_t seed = 0;
    double horizon_s = 0.0;
    double network_lifetime_s = 0.0;
    std::string lifetime_cause;  // "partition" or "horizon"
    std::optional<double> first_stall_s;
    std::int64_t injected = 0;
    std::int64_t delivered = 0;
    std::vector<std::pair<NodeId, double>> final_residual_j;  // ascending id
    std::vector<std::pair<NodeId, double>> death_time_s;      // death order
    std::map<std::string, KindCounters> packet_counters;      // kind name keyed
};

std::string serialize_report(const RunReport& r);
RunReport parse_report(const std::string& text);

struct ResidualDelta {
    NodeId node = 0;
    double dsr_j = 0.0;
    double essdsr_j = 0.0;
    double delta_j = 0.0;
};

struct ComparisonReport {
    std::string scenario_name;
    std::string scenario_digest;
    std::uint64_t seed = 0;
    RunReport dsr;
    RunReport essdsr;
    double improvement_percent = 0.0;
    std::vector<ResidualDelta> residuals;
};

std::string serialize_comparison(const ComparisonReport& c);

/// 100 * (lifetime_essdsr - lifetime_dsr) / lifetime_dsr.
double improvement_percent(double lifetime_dsr_s, double lifetime_essdsr_s);

}  // namespace manet
