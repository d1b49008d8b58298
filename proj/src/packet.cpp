#include "manet/packet.hpp"

#include <algorithm>
#include <set>

namespace manet {

bool SourceRoute::valid() const {
    if (hops.size() < 2) return false;
    std::set<NodeId> seen(hops.begin(), hops.end());
    return seen.size() == hops.size();
}

bool SourceRoute::contains(NodeId n) const {
    return std::find(hops.begin(), hops.end(), n) != hops.end();
}

bool SourceRoute::contains_intermediate(NodeId n) const {
    if (hops.size() <= 2) return false;
    return std::find(hops.begin() + 1, hops.end() - 1, n) != hops.end() - 1;
}

bool SourceRoute::uses_link(NodeId from, NodeId to) const {
    for (std::size_t i = 0; i + 1 < hops.size(); ++i) {
        if (hops[i] == from && hops[i + 1] == to) return true;
    }
    return false;
}

std::optional<std::size_t> SourceRoute::index_of(NodeId n) const {
    for (std::size_t i = 0; i < hops.size(); ++i) {
        if (hops[i] == n) return i;
    }
    return std::nullopt;
}

SourceRoute SourceRoute::reversed_prefix(std::size_t upto_index) const {
    SourceRoute out;
    for (std::size_t i = 0; i <= upto_index && i < hops.size(); ++i) {
        out.hops.push_back(hops[i]);
    }
    std::reverse(out.hops.begin(), out.hops.end());
    return out;
}

PacketKind kind_of(const Packet& p) {
    struct Visitor {
        PacketKind operator()(const RreqPacket&) const { return PacketKind::rreq; }
        PacketKind operator()(const RrepPacket&) const { return PacketKind::rrep; }
        PacketKind operator()(const RerrPacket&) const { return PacketKind::rerr; }
        PacketKind operator()(const LowEnergyPacket&) const { return PacketKind::low_energy; }
        PacketKind operator()(const DataPacket&) const { return PacketKind::data; }
        PacketKind operator()(const AckPacket&) const { return PacketKind::ack; }
    };
    return std::visit(Visitor{}, p);
}

const char* kind_name(PacketKind k) {
    switch (k) {
        case PacketKind::rreq: return "RREQ";
        case PacketKind::rrep: return "RREP";
        case PacketKind::rerr: return "RERR";
        case PacketKind::low_energy: return "LOW_ENERGY";
        case PacketKind::data: return "DATA";
        case PacketKind::ack: return "ACK";
    }
    return "?";
}

}  // namespace manet
