#include <algorithm>

#include "manet/simulator.hpp"

// Route discovery, source-routed forwarding, and route maintenance. All
// handlers run on the event loop with the receiving node already settled and
// rx-charged.

namespace manet {

void Simulator::on_arrival(const EvPacketArrival& ev) {
    NodeState& v = node(ev.node);
    settle(v);
    if (!v.alive()) {
        // Dead nodes neither receive nor pay for packets.
        trace_packet(TraceVerb::drop, v.id, ev.packet);
        return;
    }
    if (!ev.addressed) {
        // Promiscuous overhearing costs energy but triggers no processing.
        charge_rx(v, packet_bytes(ev.packet));
        return;
    }
    const ChargeOutcome oc = charge_rx(v, packet_bytes(ev.packet));
    if (oc.exhausted) {
        trace_packet(TraceVerb::drop, v.id, ev.packet);
        return;
    }
    trace_packet(TraceVerb::recv, v.id, ev.packet);
    std::visit(
        [this, &v](const auto& pkt) {
            using T = std::decay_t<decltype(pkt)>;
            if constexpr (std::is_same_v<T, RreqPacket>) {
                handle_rreq(v, pkt);
            } else if constexpr (std::is_same_v<T, RrepPacket>) {
                handle_rrep(v, pkt);
            } else if constexpr (std::is_same_v<T, RerrPacket>) {
                handle_rerr(v, pkt);
            } else if constexpr (std::is_same_v<T, LowEnergyPacket>) {
                handle_low_energy(v, pkt);
            } else if constexpr (std::is_same_v<T, DataPacket>) {
                if (pkt.hop_index >= pkt.route.hops.size() ||
                    pkt.route.hops[pkt.hop_index] != v.id) {
                    trace_packet(TraceVerb::drop, v.id, Packet{pkt});
                    return;
                }
                // Successful reception doubles as the link-level receipt
                // confirmation for the upstream hop.
                if (pkt.hop_index > 0) {
                    const NodeId upstream = pkt.route.hops[pkt.hop_index - 1];
                    const PendingTxKey key{pkt.route.hops.front(), pkt.route.hops.back(),
                                           pkt.flow_seq, pkt.hop_index};
                    node(upstream).pending_acks.erase(key);
                }
                if (v.id == pkt.route.hops.back()) {
                    deliver_data(v, pkt);
                } else {
                    v.known_flows[FlowKey{pkt.route.hops.front(),
                                          pkt.route.hops.back()}] = pkt.route;
                    forward_data(v, pkt);
                }
            } else if constexpr (std::is_same_v<T, AckPacket>) {
                if (pkt.hop_index >= pkt.route.hops.size() ||
                    pkt.route.hops[pkt.hop_index] != v.id) {
                    trace_packet(TraceVerb::drop, v.id, Packet{pkt});
                    return;
                }
                if (v.id == pkt.route.hops.back()) {
                    maybe_announce_low_energy(v);
                } else {
                    forward_ack(v, pkt);
                }
            }
        },
        ev.packet);
}

void Simulator::on_jitter_expiry(const EvJitterExpiry& ev) {
    NodeState& v = node(ev.node);
    settle(v);
    if (!v.alive()) {
        trace_packet(TraceVerb::drop, v.id, ev.packet);
        return;
    }
    if (const auto* rq = std::get_if<RreqPacket>(&ev.packet)) {
        if (v.low_energy_announced && v.id != rq->destination) {
            trace_packet(TraceVerb::drop, v.id, ev.packet);
            return;
        }
        send_broadcast(v, ev.packet);
    } else if (const auto* rp = std::get_if<RrepPacket>(&ev.packet)) {
        send_rrep_hop(v, *rp);
    }
}

// ---------------------------------------------------------------------------
// discovery
// ---------------------------------------------------------------------------

void Simulator::start_discovery(NodeState& src, NodeId destination) {
    DiscoveryState& d = src.discovery[destination];
    if (d.active) return;
    d.active = true;
    d.attempts = 1;
    d.token = ++token_counter_;
    d.excluded = scn_.protocol == Protocol::essdsr ? src.last_low_energy_culprit
                                                   : std::nullopt;
    issue_rreq(src, destination, d);
}

void Simulator::issue_rreq(NodeState& src, NodeId destination, DiscoveryState& d) {
    RreqPacket rq;
    rq.source = src.id;
    rq.destination = destination;
    rq.request_id = src.next_request_id++;
    rq.route_record = {src.id};
    rq.excluded = d.excluded;
    src.seen.check_and_insert(src.id, rq.request_id);
    send_broadcast(src, Packet{rq});
    queue_.schedule(queue_.now() + scn_.discovery.retry_timeout_s,
                    EvRetransmitTimeout{src.id, Packet{rq}, d.token});
}

void Simulator::resolve_discovery(NodeState& src, NodeId destination) {
    DiscoveryState& d = src.discovery[destination];
    d.active = false;
    d.attempts = 0;
    d.token = ++token_counter_;
    FlowRuntime* f = flow_for(src.id, destination);
    if (f && f->state == FlowState::discovering) f->state = FlowState::sending;
    auto pending = src.pending_data.find(destination);
    if (pending == src.pending_data.end()) return;
    auto& q = pending->second;
    while (!q.empty()) {
        if (!src.alive()) {
            for (const DataPacket& waiting : q) {
                trace_packet(TraceVerb::drop, src.id, Packet{waiting});
            }
            q.clear();
            if (f) f->state = FlowState::dead;
            return;
        }
        auto route = src.cache.select_route(destination);
        if (!route) return;
        DataPacket pkt = q.front();
        q.pop_front();
        pkt.route = *route;
        pkt.hop_index = 0;
        src.known_flows[FlowKey{src.id, destination}] = *route;
        forward_data(src, pkt);
    }
}

void Simulator::fail_discovery(NodeState& src, NodeId destination) {
    DiscoveryState& d = src.discovery[destination];
    d.active = false;
    d.token = ++token_counter_;
    FlowRuntime* f = flow_for(src.id, destination);
    if (f && f->state != FlowState::dead) {
        f->state = FlowState::stalled;
        f->stalled_at_s = now_s();
    }
    log_.lifetime_events.push_back(
        LifetimeEvent{now_s(), src.id, destination, "unreachable"});
    auto pending = src.pending_data.find(destination);
    if (pending != src.pending_data.end()) {
        for (const DataPacket& waiting : pending->second) {
            trace_packet(TraceVerb::drop, src.id, Packet{waiting});
        }
        pending->second.clear();
    }
}

void Simulator::handle_rreq(NodeState& v, const RreqPacket& rreq) {
    if (v.id == rreq.source) return;
    if (!v.seen.check_and_insert(rreq.source, rreq.request_id)) {
        trace_packet(TraceVerb::drop, v.id, Packet{rreq});
        return;
    }
    const auto& record = rreq.route_record;
    if (std::find(record.begin(), record.end(), v.id) != record.end()) {
        trace_packet(TraceVerb::drop, v.id, Packet{rreq});
        return;
    }
    const bool is_destination = v.id == rreq.destination;
    if (!is_destination &&
        ((rreq.excluded && *rreq.excluded == v.id) || v.low_energy_announced)) {
        trace_packet(TraceVerb::drop, v.id, Packet{rreq});
        return;
    }
    if (is_destination) {
        RrepPacket rrep;
        rrep.route.hops = record;
        rrep.route.hops.push_back(v.id);
        rrep.responder = v.id;
        queue_.schedule(queue_.now() + control_forward_delay(v, PacketKind::rrep),
                        EvJitterExpiry{v.id, Packet{rrep}});
        return;
    }
    if (scn_.toggles.intermediate_cache_reply) {
        if (auto cached = v.cache.select_route(rreq.destination)) {
            SourceRoute full;
            full.hops = record;
            full.hops.push_back(v.id);
            bool loop_free = true;
            for (std::size_t i = 1; i < cached->hops.size(); ++i) {
                if (full.contains(cached->hops[i])) {
                    loop_free = false;
                    break;
                }
                full.hops.push_back(cached->hops[i]);
            }
            if (loop_free) {
                RrepPacket rrep;
                rrep.route = full;
                rrep.responder = v.id;
                queue_.schedule(
                    queue_.now() + control_forward_delay(v, PacketKind::rrep),
                    EvJitterExpiry{v.id, Packet{rrep}});
                return;
            }
        }
    }
    RreqPacket fwd = rreq;
    fwd.route_record.push_back(v.id);
    queue_.schedule(queue_.now() + control_forward_delay(v, PacketKind::rreq),
                    EvJitterExpiry{v.id, Packet{fwd}});
}

void Simulator::send_rrep_hop(NodeState& v, const RrepPacket& rrep) {
    const auto idx = rrep.route.index_of(v.id);
    if (!idx || *idx == 0) return;
    transmit_unicast(v, rrep.route.hops[*idx - 1], Packet{rrep});
}

void Simulator::handle_rrep(NodeState& v, const RrepPacket& rrep) {
    const auto idx = rrep.route.index_of(v.id);
    if (!idx) {
        trace_packet(TraceVerb::drop, v.id, Packet{rrep});
        return;
    }
    if (*idx == 0) {
        // Back at the requester.
        const NodeId destination = rrep.route.hops.back();
        v.cache.insert(rrep.route);
        if (v.cache.select_route(destination)) {
            resolve_discovery(v, destination);
        }
        // A rejected route (through a banned node) leaves the discovery
        // running; the retry timer fires a fresh request.
        return;
    }
    SourceRoute suffix;
    suffix.hops.assign(rrep.route.hops.begin() + static_cast<std::ptrdiff_t>(*idx),
                       rrep.route.hops.end());
    if (suffix.hops.size() >= 2) v.cache.insert(suffix);
    queue_.schedule(queue_.now() + control_forward_delay(v, PacketKind::rrep),
                    EvJitterExpiry{v.id, Packet{rrep}});
}

// ---------------------------------------------------------------------------
// data plane
// ---------------------------------------------------------------------------

void Simulator::forward_data(NodeState& n, DataPacket pkt) {
    if (pkt.hop_index + 1 >= pkt.route.hops.size() ||
        pkt.route.hops[pkt.hop_index] != n.id) {
        trace_packet(TraceVerb::drop, n.id, Packet{pkt});
        return;
    }
    pkt.hop_index += 1;
    const NodeId next_hop = pkt.route.hops[pkt.hop_index];
    if (transmit_unicast(n, next_hop, Packet{pkt})) {
        const PendingTxKey key{pkt.route.hops.front(), pkt.route.hops.back(),
                               pkt.flow_seq, pkt.hop_index};
        const std::uint64_t token = ++token_counter_;
        n.pending_acks[key] = PendingTx{pkt, next_hop, 1, token};
        queue_.schedule(queue_.now() + scn_.retransmit.timeout_s,
                        EvRetransmitTimeout{n.id, Packet{pkt}, token});
    }
    maybe_announce_low_energy(n);
}

void Simulator::forward_ack(NodeState& n, AckPacket pkt) {
    if (pkt.hop_index + 1 >= pkt.route.hops.size() ||
        pkt.route.hops[pkt.hop_index] != n.id) {
        trace_packet(TraceVerb::drop, n.id, Packet{pkt});
        return;
    }
    pkt.hop_index += 1;
    transmit_unicast(n, pkt.route.hops[pkt.hop_index], Packet{pkt});
    maybe_announce_low_energy(n);
}

void Simulator::deliver_data(NodeState& dest, const DataPacket& pkt) {
    trace_packet(TraceVerb::deliver, dest.id, Packet{pkt});
    FlowRuntime* f = flow_for(pkt.route.hops.front(), dest.id);
    if (f) f->count_delivery(pkt.flow_seq);
    dest.known_flows[FlowKey{pkt.route.hops.front(), dest.id}] = pkt.route;
    AckPacket ack;
    ack.route.hops.assign(pkt.route.hops.rbegin(), pkt.route.hops.rend());
    ack.hop_index = 0;
    ack.payload_bytes = f ? f->spec.ack_bytes : 40;
    ack.flow_seq = pkt.flow_seq;
    forward_ack(dest, ack);
}

// ---------------------------------------------------------------------------
// maintenance
// ---------------------------------------------------------------------------

void Simulator::on_retransmit_timeout(const EvRetransmitTimeout& ev) {
    NodeState& v = node(ev.node);
    if (const auto* rq = std::get_if<RreqPacket>(&ev.packet)) {
        auto it = v.discovery.find(rq->destination);
        if (it == v.discovery.end()) return;
        DiscoveryState& d = it->second;
        if (!d.active || d.token != ev.token) return;
        settle(v);
        if (!v.alive()) {
            d.active = false;
            return;
        }
        if (d.attempts >= scn_.discovery.max_attempts) {
            fail_discovery(v, rq->destination);
            return;
        }
        d.attempts += 1;
        issue_rreq(v, rq->destination, d);
        return;
    }
    const auto* dp = std::get_if<DataPacket>(&ev.packet);
    if (!dp) return;
    const PendingTxKey key{dp->route.hops.front(), dp->route.hops.back(), dp->flow_seq,
                           dp->hop_index};
    auto it = v.pending_acks.find(key);
    if (it == v.pending_acks.end() || it->second.token != ev.token) return;
    settle(v);
    if (!v.alive()) {
        v.pending_acks.erase(it);
        return;
    }
    if (it->second.attempts >= scn_.retransmit.max_attempts) {
        const NodeId failed_hop = it->second.next_hop;
        const DataPacket lost = it->second.packet;
        v.pending_acks.erase(it);
        trace_packet(TraceVerb::drop, v.id, Packet{lost});
        route_maintenance(v, failed_hop, lost);
        return;
    }
    it->second.attempts += 1;
    transmit_unicast(v, it->second.next_hop, Packet{*dp}, TraceVerb::retransmit);
    queue_.schedule(queue_.now() + scn_.retransmit.timeout_s,
                    EvRetransmitTimeout{v.id, Packet{*dp}, ev.token});
}

void Simulator::route_maintenance(NodeState& n, NodeId failed_next_hop,
                                  const DataPacket& pkt) {
    n.cache.prune_link(n.id, failed_next_hop);
    const NodeId origin = pkt.route.hops.front();
    if (n.id == origin) {
        source_reroute(n, pkt.route.hops.back());
        return;
    }
    const auto idx = pkt.route.index_of(n.id);
    if (!idx || *idx == 0) return;
    RerrPacket rerr;
    rerr.broken_from = n.id;
    rerr.broken_to = failed_next_hop;
    rerr.original_sender = origin;
    rerr.path = pkt.route.reversed_prefix(*idx);
    rerr.hop_index = 0;
    forward_rerr(n, std::move(rerr));
}

void Simulator::forward_rerr(NodeState& n, RerrPacket rerr) {
    if (rerr.hop_index + 1 >= rerr.path.hops.size() ||
        rerr.path.hops[rerr.hop_index] != n.id) {
        return;
    }
    rerr.hop_index += 1;
    const NodeId next_hop = rerr.path.hops[rerr.hop_index];
    transmit_unicast(n, next_hop, Packet{rerr});
}

void Simulator::handle_rerr(NodeState& v, const RerrPacket& rerr) {
    if (rerr.low_energy_node) {
        v.cache.ban_intermediate(*rerr.low_energy_node);
        if (scn_.protocol == Protocol::essdsr) {
            v.last_low_energy_culprit = *rerr.low_energy_node;
        }
    } else {
        v.cache.prune_link(rerr.broken_from, rerr.broken_to);
    }
    if (v.id == rerr.original_sender) {
        for (FlowRuntime& f : flows_) {
            if (f.spec.source != v.id) continue;
            if (f.state == FlowState::stalled || f.state == FlowState::dead) continue;
            source_reroute(v, f.spec.destination);
        }
        return;
    }
    forward_rerr(v, rerr);
}

void Simulator::source_reroute(NodeState& src, NodeId destination) {
    FlowRuntime* f = flow_for(src.id, destination);
    const bool flow_active =
        f && (f->state == FlowState::sending || f->state == FlowState::discovering);
    auto pending = src.pending_data.find(destination);
    const bool has_pending =
        pending != src.pending_data.end() && !pending->second.empty();
    if (!flow_active && !has_pending) return;
    if (src.cache.select_route(destination)) return;  // another cached route works
    if (f && f->state == FlowState::sending) f->state = FlowState::discovering;
    start_discovery(src, destination);
}

}  // namespace manet
