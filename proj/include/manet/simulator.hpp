#pragma once

#include <cstdint>
#include <map>
#include <variant>
#include <vector>

#include "manet/node.hpp"
#include "manet/packet.hpp"
#include "manet/scenario.hpp"
#include "manet/sim_core.hpp"
#include "manet/traffic_metrics.hpp"

namespace manet {

struct EvPacketArrival {
    NodeId node = 0;
    Packet packet;
    bool addressed = true;  // false for promiscuous overhearing
};

struct EvJitterExpiry {
    NodeId node = 0;
    Packet packet;
};

struct EvTrafficTick {
    std::size_t flow_index = 0;
};

struct EvEnergySnapshot {};

struct EvRetransmitTimeout {
    NodeId node = 0;
    Packet packet;
    std::uint64_t token = 0;
};

using EventPayload = std::variant<EvPacketArrival, EvJitterExpiry, EvTrafficTick,
                                  EvEnergySnapshot, EvRetransmitTimeout>;

/// One self-contained simulation instance: the event engine, all node state,
/// the traffic flows, and the metrics log. Instances share nothing, so
/// independent scenarios may run on different threads.
class Simulator {
public:
    explicit Simulator(Scenario scenario);

    /// Full run to the scenario horizon: start(), step_until(horizon),
    /// finalize().
    void run();

    // Finer-grained controls, used by tests.
    void start();
    std::uint64_t step_until(double t_s);
    void finalize();

    /// Schedules a packet arrival, bypassing any sender (test seam).
    void inject_arrival(NodeId node, Packet packet, double at_s);

    double now_s() const { return queue_.now().seconds(); }
    const Scenario& scenario() const { return scn_; }
    const MetricsLog& log() const { return log_; }
    const std::vector<FlowRuntime>& flows() const { return flows_; }
    NodeState& node(NodeId id) { return nodes_.at(index_.at(id)); }
    const NodeState& node(NodeId id) const { return nodes_.at(index_.at(id)); }
    const std::vector<NodeState>& nodes() const { return nodes_; }

    NetworkLifetime network_lifetime() const;

private:
    using Queue = EventQueue<EventPayload>;

    // engine
    void dispatch(const Event<EventPayload>& ev);
    void on_arrival(const EvPacketArrival& ev);
    void on_jitter_expiry(const EvJitterExpiry& ev);
    void on_traffic_tick(const EvTrafficTick& ev);
    void on_snapshot();
    void on_retransmit_timeout(const EvRetransmitTimeout& ev);

    // radio plumbing
    void settle(NodeState& n);
    ChargeOutcome charge_tx(NodeState& n, int bytes);
    ChargeOutcome charge_rx(NodeState& n, int bytes);
    int packet_bytes(const Packet& p) const;
    bool frozen() const { return scn_.toggles.freeze_energy; }
    void send_broadcast(NodeState& from, const Packet& p);
    /// Returns false when the frame never made it to the air (sender drained).
    bool transmit_unicast(NodeState& from, NodeId to, const Packet& p,
                          TraceVerb verb = TraceVerb::send);

    // DSR state machine
    void start_discovery(NodeState& src, NodeId destination);
    void issue_rreq(NodeState& src, NodeId destination, DiscoveryState& d);
    void resolve_discovery(NodeState& src, NodeId destination);
    void fail_discovery(NodeState& src, NodeId destination);
    void handle_rreq(NodeState& n, const RreqPacket& rreq);
    void handle_rrep(NodeState& n, const RrepPacket& rrep);
    void handle_rerr(NodeState& n, const RerrPacket& rerr);
    void send_rrep_hop(NodeState& n, const RrepPacket& rrep);
    void forward_rerr(NodeState& n, RerrPacket rerr);
    void forward_data(NodeState& n, DataPacket pkt);
    void forward_ack(NodeState& n, AckPacket pkt);
    void deliver_data(NodeState& dest, const DataPacket& pkt);
    void route_maintenance(NodeState& n, NodeId failed_next_hop, const DataPacket& pkt);
    void source_reroute(NodeState& src, NodeId destination);

    // survival mechanism
    double control_forward_delay(const NodeState& n, PacketKind kind);
    void maybe_announce_low_energy(NodeState& n);
    void handle_low_energy(NodeState& n, const LowEnergyPacket& pkt);

    // metrics
    void trace_packet(TraceVerb verb, NodeId node, const Packet& p);
    void record_death(NodeState& n);
    void snapshot_all();
    FlowRuntime* flow_for(NodeId source, NodeId destination);

    Scenario scn_;
    RngStream rng_;
    Queue queue_;
    std::vector<NodeState> nodes_;  // ascending id order
    std::map<NodeId, std::size_t> index_;
    std::vector<FlowRuntime> flows_;
    MetricsLog log_;
    std::uint64_t token_counter_ = 0;
    double last_snapshot_ = -1.0;
    bool snapshot_in_progress_ = false;
    bool started_ = false;
    bool finalized_ = false;
};

}  // namespace manet
