#pragma once

#include <cstdint>
#include <deque>
#include <map>
#include <optional>

#include "manet/packet.hpp"
#include "manet/radio_energy.hpp"
#include "manet/route_cache.hpp"
#include "manet/types.hpp"

namespace manet {

/// Identifies one link-level transmission awaiting its implicit receipt
/// confirmation: same packet, same hop.
struct PendingTxKey {
    NodeId flow_source = 0;
    NodeId flow_destination = 0;
    std::int64_t seq = 0;
    std::size_t hop_index = 0;

    friend bool operator<(const PendingTxKey& a, const PendingTxKey& b) {
        if (a.flow_source != b.flow_source) return a.flow_source < b.flow_source;
        if (a.flow_destination != b.flow_destination) {
            return a.flow_destination < b.flow_destination;
        }
        if (a.seq != b.seq) return a.seq < b.seq;
        return a.hop_index < b.hop_index;
    }
};

struct PendingTx {
    DataPacket packet;
    NodeId next_hop = 0;
    int attempts = 1;
    std::uint64_t token = 0;
};

struct DiscoveryState {
    bool active = false;
    int attempts = 0;
    std::uint64_t token = 0;
    std::optional<NodeId> excluded;
};

struct FlowKey {
    NodeId source = 0;
    NodeId destination = 0;

    friend bool operator<(const FlowKey& a, const FlowKey& b) {
        if (a.source != b.source) return a.source < b.source;
        return a.destination < b.destination;
    }
};

/// Everything one node owns: position, battery, protocol tables, and the
/// source-side buffers for flows it originates.
struct NodeState {
    NodeId id = 0;
    Position pos;
    EnergyAccount energy;
    RouteCache cache{0};
    DedupTable seen;
    std::uint32_t next_request_id = 0;

    bool low_energy_announced = false;
    std::optional<NodeId> last_low_energy_culprit;
    bool death_logged = false;

    std::map<NodeId, std::deque<DataPacket>> pending_data;  // keyed by destination
    std::map<NodeId, DiscoveryState> discovery;             // keyed by destination
    std::map<PendingTxKey, PendingTx> pending_acks;
    std::map<FlowKey, SourceRoute> known_flows;  // last data route seen per flow

    bool alive() const { return energy.alive(); }
};

}  // namespace manet
