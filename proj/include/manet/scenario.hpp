#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "manet/essdsr.hpp"
#include "manet/radio_energy.hpp"
#include "manet/traffic_metrics.hpp"
#include "manet/types.hpp"

namespace manet {

class ScenarioError : public std::runtime_error {
public:
    explicit ScenarioError(const std::string& what) : std::runtime_error(what) {}
};

struct Area {
    double width = 300.0;
    double height = 200.0;
};

struct NodeSpec {
    NodeId id = 0;
    Position pos;
    double initial_j = 10.0;
};

struct Toggles {
    bool intermediate_cache_reply = false;
    bool rrep_energy_jitter = true;
    bool promiscuous_rx = false;
    // Diagnostic switches: freeze all energy accounting, or force every
    // control-packet delay to zero.
    bool zero_jitter = false;
    bool freeze_energy = false;
};

struct RetransmitParams {
    int max_attempts = 3;     // original send plus two retries
    double timeout_s = 0.05;
};

struct DiscoveryParams {
    int max_attempts = 5;
    double retry_timeout_s = 0.5;
};

struct Scenario {
    std::string name = "scenario";
    Area area;
    RadioParams radio;
    Protocol protocol = Protocol::dsr;
    LowEnergyThreshold threshold;
    EnergyJitterParams jitter;
    double dsr_jitter_max_s = 0.01;
    Toggles toggles;
    std::vector<NodeSpec> nodes;
    std::vector<FlowSpec> flows;
    double horizon_s = 60.0;
    std::uint64_t seed = 1;
    RetransmitParams retransmit;
    DiscoveryParams discovery;
    int control_packet_bytes = 40;
    double snapshot_interval_s = 0.5;

    /// Throws ScenarioError naming the offending field.
    void validate() const;

    std::vector<Site> topology() const;
    std::vector<NodeId> node_ids() const;
};

/// The built-in 12-node comparison scenario: source node 0 on the left edge,
/// destination node 11 on the right edge, every route forced through the two
/// mid-field relays (nodes 5 and 9), even ids at 20 J and odd ids at 10 J.
Scenario paper_default();

std::string serialize_scenario(const Scenario& s);
Scenario parse_scenario(const std::string& text);

Scenario load_scenario(const std::string& path);
void save_scenario(const Scenario& s, const std::string& path);

/// FNV-1a over the canonical serialization; stable across platforms.
std::string scenario_digest(const Scenario& s);

}  // namespace manet
