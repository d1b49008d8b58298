#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "manet/packet.hpp"
#include "manet/radio_energy.hpp"
#include "manet/types.hpp"

namespace manet {

enum class FlowState { discovering, sending, stalled, dead };

const char* flow_state_name(FlowState s);

/// Constant-rate reliable flow: fixed-size data packets one way, fixed-size
/// acks back, no congestion window.
struct FlowSpec {
    NodeId source = 0;
    NodeId destination = 0;
    int data_bytes = 1080;
    int ack_bytes = 40;
    double send_interval_s = 0.05;
};

struct FlowRuntime {
    FlowSpec spec;
    std::int64_t next_seq = 0;
    FlowState state = FlowState::sending;
    std::int64_t injected = 0;
    std::int64_t delivered = 0;
    std::optional<double> stalled_at_s;
    std::set<std::int64_t> delivered_seqs;  // dedupes retransmission overlap

    /// Counts a delivery once per sequence number.
    bool count_delivery(std::int64_t seq);
};

enum class TraceVerb { send, recv, deliver, drop, retransmit };

const char* verb_name(TraceVerb v);

/// One packet event. The canonical text line is
///   time node event packet-kind source dest id route flags
/// with flags "LE" for the low-energy bit and "-" otherwise.
struct TraceEvent {
    double t = 0.0;
    NodeId node = 0;
    TraceVerb verb = TraceVerb::send;
    PacketKind kind = PacketKind::data;
    NodeId source = -1;
    NodeId dest = -1;
    std::int64_t id = 0;
    std::vector<NodeId> route;
    bool low_energy_flag = false;
    std::optional<NodeId> excluded;
};

std::string trace_line(const TraceEvent& ev);

struct SnapshotRow {
    double t = 0.0;
    NodeId node = 0;
    double residual_j = 0.0;
};

struct DeathRecord {
    NodeId node = 0;
    double t = 0.0;
};

struct LifetimeEvent {
    double t = 0.0;
    NodeId source = 0;
    NodeId destination = 0;
    std::string what;  // e.g. "unreachable"
};

struct KindCounters {
    std::int64_t sent = 0;
    std::int64_t received = 0;
    std::int64_t dropped = 0;
};

struct MetricsLog {
    std::vector<SnapshotRow> snapshots;
    std::vector<DeathRecord> deaths;
    std::vector<LifetimeEvent> lifetime_events;
    std::map<PacketKind, KindCounters> counters;
    std::vector<TraceEvent> trace;
};

struct NetworkLifetime {
    double value_s = 0.0;
    enum class Cause { partition, horizon } cause = Cause::horizon;
};

const char* cause_name(NetworkLifetime::Cause c);

/// Earliest instant at which no path of alive nodes joins src and dst,
/// found by replaying the death log against the static connectivity graph;
/// the horizon when the pair stays connected.
NetworkLifetime compute_network_lifetime(const MetricsLog& log,
                                         const std::vector<Site>& topology,
                                         const RadioParams& params, NodeId src,
                                         NodeId dst, double horizon_s);

struct NodeLifetime {
    NodeId node = 0;
    std::optional<double> death_time_s;  // empty when the node survived
    double final_residual_j = 0.0;
};

std::vector<NodeLifetime> compute_node_lifetimes(const MetricsLog& log,
                                                 const std::vector<NodeId>& node_ids);

// CSV / text exports
std::string energy_csv(const MetricsLog& log);
std::string deaths_csv(const MetricsLog& log);
std::string trace_text(const MetricsLog& log);

}  // namespace manet
