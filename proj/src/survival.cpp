#include "manet/simulator.hpp"

// The energy-saving and survival layer: control packets wait on an
// energy-proportional timer instead of DSR's uniform jitter, and a node whose
// battery falls to the threshold announces itself so neighbours reroute
// around it before it dies.

namespace manet {

double Simulator::control_forward_delay(const NodeState& n, PacketKind kind) {
    if (scn_.toggles.zero_jitter) return 0.0;
    if (scn_.protocol == Protocol::dsr) {
        // Uniform broadcast jitter applies to flooded requests only; replies
        // retrace a unicast path and go out immediately.
        if (kind == PacketKind::rreq) return rng_.uniform(0.0, scn_.dsr_jitter_max_s);
        return 0.0;
    }
    if (kind == PacketKind::rreq) {
        return energy_jitter(n.energy.residual_j(), scn_.jitter);
    }
    if (kind == PacketKind::rrep && scn_.toggles.rrep_energy_jitter) {
        return energy_jitter(n.energy.residual_j(), scn_.jitter);
    }
    return 0.0;
}

void Simulator::maybe_announce_low_energy(NodeState& n) {
    if (scn_.protocol != Protocol::essdsr) return;
    if (n.low_energy_announced) return;
    if (!n.alive()) return;
    if (!check_low_energy(n.energy, scn_.threshold)) return;
    // Announce once, then keep forwarding whatever is already routed through
    // us until the sources have rebuilt their paths.
    n.low_energy_announced = true;
    LowEnergyPacket pkt;
    pkt.origin = n.id;
    send_broadcast(n, Packet{pkt});
}

void Simulator::handle_low_energy(NodeState& v, const LowEnergyPacket& pkt) {
    const NodeId origin = pkt.origin;
    std::vector<std::pair<FlowKey, SourceRoute>> affected;
    for (const auto& [key, route] : v.known_flows) {
        if (route.contains_intermediate(origin)) affected.push_back({key, route});
    }
    v.cache.ban_intermediate(origin);
    if (scn_.protocol == Protocol::essdsr) v.last_low_energy_culprit = origin;
    for (const auto& [key, route] : affected) {
        if (key.source == v.id) {
            source_reroute(v, key.destination);
            continue;
        }
        const auto idx = route.index_of(v.id);
        if (!idx || *idx == 0) continue;
        RerrPacket rerr;
        rerr.broken_from = v.id;
        rerr.broken_to = origin;
        rerr.original_sender = key.source;
        rerr.low_energy_node = origin;
        rerr.path = route.reversed_prefix(*idx);
        rerr.hop_index = 0;
        forward_rerr(v, std::move(rerr));
    }
}

}  // namespace manet
