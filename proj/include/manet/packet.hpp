#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "manet/types.hpp"

namespace manet {

/// Full hop sequence from source to destination, both endpoints included.
struct SourceRoute {
    std::vector<NodeId> hops;

    bool valid() const;
    int hop_count() const { return static_cast<int>(hops.size()) - 1; }
    bool contains(NodeId n) const;
    /// True when n appears strictly between the endpoints.
    bool contains_intermediate(NodeId n) const;
    bool uses_link(NodeId from, NodeId to) const;
    std::optional<std::size_t> index_of(NodeId n) const;
    SourceRoute reversed_prefix(std::size_t upto_index) const;

    friend bool operator==(const SourceRoute& a, const SourceRoute& b) {
        return a.hops == b.hops;
    }
};

struct RreqPacket {
    NodeId source = 0;
    NodeId destination = 0;
    std::uint32_t request_id = 0;
    std::vector<NodeId> route_record;   // starts at source, grows hop by hop
    std::optional<NodeId> excluded;     // node barred from forwarding this flood
};

struct RrepPacket {
    SourceRoute route;      // source ... destination of the answered request
    NodeId responder = 0;
};

struct RerrPacket {
    NodeId broken_from = 0;
    NodeId broken_to = 0;
    NodeId original_sender = 0;
    std::optional<NodeId> low_energy_node;  // set when reporting a weak node, not a dead link
    SourceRoute path;                       // reverse path this report travels
    std::size_t hop_index = 0;              // index of the current holder in path
};

struct LowEnergyPacket {
    NodeId origin = 0;
    bool low_energy = true;  // flag bit, always set on the wire
};

struct DataPacket {
    SourceRoute route;
    std::size_t hop_index = 0;  // index of the current holder in route
    int payload_bytes = 1080;
    std::int64_t flow_seq = 0;
};

struct AckPacket {
    SourceRoute route;          // reversed data route
    std::size_t hop_index = 0;
    int payload_bytes = 40;
    std::int64_t flow_seq = 0;
};

using Packet = std::variant<RreqPacket, RrepPacket, RerrPacket, LowEnergyPacket,
                            DataPacket, AckPacket>;

enum class PacketKind { rreq, rrep, rerr, low_energy, data, ack };

PacketKind kind_of(const Packet& p);
const char* kind_name(PacketKind k);

}  // namespace manet
