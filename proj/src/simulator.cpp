#include "manet/simulator.hpp"

#include <algorithm>
#include <stdexcept>

namespace manet {

Simulator::Simulator(Scenario scenario)
    : scn_(std::move(scenario)), rng_(scn_.seed) {
    scn_.validate();
    std::vector<NodeSpec> specs = scn_.nodes;
    std::sort(specs.begin(), specs.end(),
              [](const NodeSpec& a, const NodeSpec& b) { return a.id < b.id; });
    nodes_.reserve(specs.size());
    for (const NodeSpec& spec : specs) {
        NodeState n;
        n.id = spec.id;
        n.pos = spec.pos;
        n.energy = EnergyAccount(spec.initial_j, SimTime(0.0));
        n.cache = RouteCache(spec.id);
        index_[spec.id] = nodes_.size();
        nodes_.push_back(std::move(n));
    }
    for (const FlowSpec& f : scn_.flows) {
        FlowRuntime rt;
        rt.spec = f;
        rt.state = FlowState::sending;
        flows_.push_back(rt);
    }
}

void Simulator::run() {
    start();
    step_until(scn_.horizon_s);
    finalize();
}

void Simulator::start() {
    if (started_) throw std::logic_error("Simulator::start: already started");
    started_ = true;
    queue_.schedule(SimTime(0.0), EvEnergySnapshot{});
    for (std::size_t i = 0; i < flows_.size(); ++i) {
        queue_.schedule(SimTime(0.0), EvTrafficTick{i});
    }
}

std::uint64_t Simulator::step_until(double t_s) {
    if (!started_) throw std::logic_error("Simulator::step_until: not started");
    return queue_.run_until(SimTime(t_s),
                            [this](const Event<EventPayload>& ev) { dispatch(ev); });
}

void Simulator::finalize() {
    if (finalized_) return;
    finalized_ = true;
    for (NodeState& n : nodes_) settle(n);
    if (last_snapshot_ < now_s()) snapshot_all();
}

void Simulator::inject_arrival(NodeId node_id, Packet packet, double at_s) {
    queue_.schedule(SimTime(at_s), EvPacketArrival{node_id, std::move(packet), true});
}

NetworkLifetime Simulator::network_lifetime() const {
    const FlowSpec& f = flows_.front().spec;
    return compute_network_lifetime(log_, scn_.topology(), scn_.radio, f.source,
                                    f.destination, scn_.horizon_s);
}

void Simulator::dispatch(const Event<EventPayload>& ev) {
    std::visit(
        [this](const auto& e) {
            using T = std::decay_t<decltype(e)>;
            if constexpr (std::is_same_v<T, EvPacketArrival>) {
                on_arrival(e);
            } else if constexpr (std::is_same_v<T, EvJitterExpiry>) {
                on_jitter_expiry(e);
            } else if constexpr (std::is_same_v<T, EvTrafficTick>) {
                on_traffic_tick(e);
            } else if constexpr (std::is_same_v<T, EvEnergySnapshot>) {
                on_snapshot();
            } else {
                on_retransmit_timeout(e);
            }
        },
        ev.what);
}

// ---------------------------------------------------------------------------
// radio plumbing
// ---------------------------------------------------------------------------

void Simulator::settle(NodeState& n) {
    if (frozen()) return;
    const bool was_alive = n.energy.alive();
    n.energy.settle_idle(queue_.now(), scn_.radio);
    if (was_alive && !n.energy.alive()) record_death(n);
}

ChargeOutcome Simulator::charge_tx(NodeState& n, int bytes) {
    if (frozen()) return ChargeOutcome{0.0, false};
    ChargeOutcome oc = n.energy.charge_tx(bytes, scn_.radio, queue_.now());
    if (oc.exhausted) record_death(n);
    return oc;
}

ChargeOutcome Simulator::charge_rx(NodeState& n, int bytes) {
    if (frozen()) return ChargeOutcome{0.0, false};
    ChargeOutcome oc = n.energy.charge_rx(bytes, scn_.radio, queue_.now());
    if (oc.exhausted) record_death(n);
    return oc;
}

int Simulator::packet_bytes(const Packet& p) const {
    switch (kind_of(p)) {
        case PacketKind::data: return std::get<DataPacket>(p).payload_bytes;
        case PacketKind::ack: return std::get<AckPacket>(p).payload_bytes;
        default: return scn_.control_packet_bytes;
    }
}

void Simulator::send_broadcast(NodeState& from, const Packet& p) {
    const int bytes = packet_bytes(p);
    const ChargeOutcome oc = charge_tx(from, bytes);
    if (oc.exhausted) {
        trace_packet(TraceVerb::drop, from.id, p);
        return;
    }
    trace_packet(TraceVerb::send, from.id, p);
    const double dur = tx_duration(bytes, scn_.radio);
    const SimTime arrive = queue_.now() + dur;
    // Recipients are the alive in-range neighbours at send time.
    for (NodeState& w : nodes_) {
        if (w.id == from.id) continue;
        settle(w);
        if (!w.alive()) continue;
        if (!in_range(from.pos, w.pos, scn_.radio)) continue;
        queue_.schedule(arrive, EvPacketArrival{w.id, p, true});
    }
}

bool Simulator::transmit_unicast(NodeState& from, NodeId to, const Packet& p,
                                 TraceVerb verb) {
    const int bytes = packet_bytes(p);
    const ChargeOutcome oc = charge_tx(from, bytes);
    if (oc.exhausted) {
        trace_packet(TraceVerb::drop, from.id, p);
        return false;
    }
    trace_packet(verb, from.id, p);
    const double dur = tx_duration(bytes, scn_.radio);
    const SimTime arrive = queue_.now() + dur;
    if (in_range(from.pos, node(to).pos, scn_.radio)) {
        queue_.schedule(arrive, EvPacketArrival{to, p, true});
    } else {
        trace_packet(TraceVerb::drop, from.id, p);
    }
    if (scn_.toggles.promiscuous_rx) {
        for (NodeState& w : nodes_) {
            if (w.id == from.id || w.id == to) continue;
            settle(w);
            if (!w.alive()) continue;
            if (!in_range(from.pos, w.pos, scn_.radio)) continue;
            queue_.schedule(arrive, EvPacketArrival{w.id, p, false});
        }
    }
    return true;
}

// ---------------------------------------------------------------------------
// traffic and bookkeeping
// ---------------------------------------------------------------------------

void Simulator::on_traffic_tick(const EvTrafficTick& ev) {
    FlowRuntime& f = flows_.at(ev.flow_index);
    if (f.state == FlowState::stalled || f.state == FlowState::dead) return;
    NodeState& src = node(f.spec.source);
    settle(src);
    if (!src.alive()) {
        f.state = FlowState::dead;
        return;
    }
    if (f.state == FlowState::sending) {
        DataPacket pkt;
        pkt.payload_bytes = f.spec.data_bytes;
        pkt.flow_seq = f.next_seq++;
        ++f.injected;
        auto route = src.cache.select_route(f.spec.destination);
        if (route) {
            pkt.route = *route;
            pkt.hop_index = 0;
            src.known_flows[FlowKey{src.id, f.spec.destination}] = *route;
            forward_data(src, pkt);
        } else {
            src.pending_data[f.spec.destination].push_back(pkt);
            f.state = FlowState::discovering;
            start_discovery(src, f.spec.destination);
        }
    }
    queue_.schedule(queue_.now() + f.spec.send_interval_s, EvTrafficTick{ev.flow_index});
}

void Simulator::on_snapshot() {
    snapshot_all();
    const SimTime next = queue_.now() + scn_.snapshot_interval_s;
    if (next.seconds() <= scn_.horizon_s) {
        queue_.schedule(next, EvEnergySnapshot{});
    }
}

void Simulator::snapshot_all() {
    snapshot_in_progress_ = true;
    for (NodeState& n : nodes_) settle(n);
    const double t = now_s();
    for (const NodeState& n : nodes_) {
        log_.snapshots.push_back(SnapshotRow{t, n.id, n.energy.residual_j()});
    }
    snapshot_in_progress_ = false;
    last_snapshot_ = t;
}

void Simulator::record_death(NodeState& n) {
    if (n.death_logged) return;
    n.death_logged = true;
    const double t = n.energy.dead_since() ? n.energy.dead_since()->seconds() : now_s();
    log_.deaths.push_back(DeathRecord{n.id, t});
    if (!snapshot_in_progress_) snapshot_all();
}

FlowRuntime* Simulator::flow_for(NodeId source, NodeId destination) {
    for (FlowRuntime& f : flows_) {
        if (f.spec.source == source && f.spec.destination == destination) return &f;
    }
    return nullptr;
}

void Simulator::trace_packet(TraceVerb verb, NodeId node_id, const Packet& p) {
    TraceEvent ev;
    ev.t = now_s();
    ev.node = node_id;
    ev.verb = verb;
    ev.kind = kind_of(p);
    std::visit(
        [&ev](const auto& pkt) {
            using T = std::decay_t<decltype(pkt)>;
            if constexpr (std::is_same_v<T, RreqPacket>) {
                ev.source = pkt.source;
                ev.dest = pkt.destination;
                ev.id = pkt.request_id;
                ev.route = pkt.route_record;
                ev.excluded = pkt.excluded;
            } else if constexpr (std::is_same_v<T, RrepPacket>) {
                ev.source = pkt.route.hops.front();
                ev.dest = pkt.route.hops.back();
                ev.route = pkt.route.hops;
            } else if constexpr (std::is_same_v<T, RerrPacket>) {
                ev.source = pkt.broken_from;
                ev.dest = pkt.broken_to;
                ev.route = pkt.path.hops;
                ev.low_energy_flag = pkt.low_energy_node.has_value();
                ev.excluded = pkt.low_energy_node;
            } else if constexpr (std::is_same_v<T, LowEnergyPacket>) {
                ev.source = pkt.origin;
                ev.dest = -1;
                ev.low_energy_flag = pkt.low_energy;
            } else if constexpr (std::is_same_v<T, DataPacket> ||
                                 std::is_same_v<T, AckPacket>) {
                // queued packets have no route assigned yet
                if (!pkt.route.hops.empty()) {
                    ev.source = pkt.route.hops.front();
                    ev.dest = pkt.route.hops.back();
                    ev.route = pkt.route.hops;
                }
                ev.id = pkt.flow_seq;
            }
        },
        p);
    KindCounters& c = log_.counters[ev.kind];
    switch (verb) {
        case TraceVerb::send:
        case TraceVerb::retransmit: ++c.sent; break;
        case TraceVerb::recv: ++c.received; break;
        case TraceVerb::drop: ++c.dropped; break;
        case TraceVerb::deliver: break;
    }
    log_.trace.push_back(std::move(ev));
}

}  // namespace manet
