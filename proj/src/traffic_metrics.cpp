#include "manet/traffic_metrics.hpp"

#include <algorithm>
#include <cstdio>
#include <deque>

namespace manet {

const char* flow_state_name(FlowState s) {
    switch (s) {
        case FlowState::discovering: return "discovering";
        case FlowState::sending: return "sending";
        case FlowState::stalled: return "stalled";
        case FlowState::dead: return "dead";
    }
    return "?";
}

bool FlowRuntime::count_delivery(std::int64_t seq) {
    if (!delivered_seqs.insert(seq).second) return false;
    ++delivered;
    return true;
}

const char* verb_name(TraceVerb v) {
    switch (v) {
        case TraceVerb::send: return "SEND";
        case TraceVerb::recv: return "RECV";
        case TraceVerb::deliver: return "DLVR";
        case TraceVerb::drop: return "DROP";
        case TraceVerb::retransmit: return "RTX";
    }
    return "?";
}

const char* cause_name(NetworkLifetime::Cause c) {
    return c == NetworkLifetime::Cause::partition ? "partition" : "horizon";
}

std::string trace_line(const TraceEvent& ev) {
    char head[128];
    std::snprintf(head, sizeof(head), "%.9f %d %s %s %d %d %lld ", ev.t, ev.node,
                  verb_name(ev.verb), kind_name(ev.kind), ev.source, ev.dest,
                  static_cast<long long>(ev.id));
    std::string line(head);
    if (ev.route.empty()) {
        line += "-";
    } else {
        for (std::size_t i = 0; i < ev.route.size(); ++i) {
            if (i) line += "-";
            line += std::to_string(ev.route[i]);
        }
    }
    line += ev.low_energy_flag ? " LE" : " -";
    return line;
}

namespace {

bool path_exists(const std::vector<Site>& topology, const RadioParams& params,
                 const std::set<NodeId>& dead, NodeId src, NodeId dst) {
    std::map<NodeId, Position> pos;
    for (const Site& s : topology) {
        if (!dead.count(s.id)) pos.emplace(s.id, s.pos);
    }
    if (!pos.count(src) || !pos.count(dst)) return false;
    std::set<NodeId> visited{src};
    std::deque<NodeId> frontier{src};
    while (!frontier.empty()) {
        NodeId u = frontier.front();
        frontier.pop_front();
        if (u == dst) return true;
        for (const auto& [v, p] : pos) {
            if (visited.count(v)) continue;
            if (in_range(pos.at(u), p, params)) {
                visited.insert(v);
                frontier.push_back(v);
            }
        }
    }
    return false;
}

}  // namespace

NetworkLifetime compute_network_lifetime(const MetricsLog& log,
                                         const std::vector<Site>& topology,
                                         const RadioParams& params, NodeId src,
                                         NodeId dst, double horizon_s) {
    std::set<NodeId> dead;
    if (!path_exists(topology, params, dead, src, dst)) {
        return NetworkLifetime{0.0, NetworkLifetime::Cause::partition};
    }
    std::vector<DeathRecord> deaths = log.deaths;
    std::sort(deaths.begin(), deaths.end(), [](const DeathRecord& a, const DeathRecord& b) {
        if (a.t != b.t) return a.t < b.t;
        return a.node < b.node;
    });
    for (const DeathRecord& d : deaths) {
        if (d.t > horizon_s) break;
        dead.insert(d.node);
        if (!path_exists(topology, params, dead, src, dst)) {
            return NetworkLifetime{d.t, NetworkLifetime::Cause::partition};
        }
    }
    return NetworkLifetime{horizon_s, NetworkLifetime::Cause::horizon};
}

std::vector<NodeLifetime> compute_node_lifetimes(const MetricsLog& log,
                                                 const std::vector<NodeId>& node_ids) {
    std::map<NodeId, double> final_residual;
    for (const SnapshotRow& row : log.snapshots) {
        final_residual[row.node] = row.residual_j;  // rows are time-ordered
    }
    std::map<NodeId, double> death_at;
    for (const DeathRecord& d : log.deaths) {
        if (!death_at.count(d.node)) death_at[d.node] = d.t;
    }
    std::vector<NodeLifetime> out;
    for (NodeId id : node_ids) {
        NodeLifetime nl;
        nl.node = id;
        auto d = death_at.find(id);
        if (d != death_at.end()) nl.death_time_s = d->second;
        auto r = final_residual.find(id);
        nl.final_residual_j = r == final_residual.end() ? 0.0 : r->second;
        out.push_back(nl);
    }
    return out;
}

std::string energy_csv(const MetricsLog& log) {
    std::string out = "time,node,residual_joules\n";
    char buf[96];
    for (const SnapshotRow& row : log.snapshots) {
        std::snprintf(buf, sizeof(buf), "%.9f,%d,%.9f\n", row.t, row.node, row.residual_j);
        out += buf;
    }
    return out;
}

std::string deaths_csv(const MetricsLog& log) {
    std::string out = "node,death_time\n";
    char buf[64];
    for (const DeathRecord& d : log.deaths) {
        std::snprintf(buf, sizeof(buf), "%d,%.9f\n", d.node, d.t);
        out += buf;
    }
    return out;
}

std::string trace_text(const MetricsLog& log) {
    std::string out;
    for (const TraceEvent& ev : log.trace) {
        out += trace_line(ev);
        out += '\n';
    }
    return out;
}

}  // namespace manet
