#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <utility>
#include <vector>

#include "manet/packet.hpp"

namespace manet {

/// Per-node store of full source routes, keyed by destination.
///
/// Every stored route starts at the owning node. Nodes reported as low on
/// energy are banned as intermediates: existing routes through them are
/// pruned and later inserts are rejected, though a banned node may still be
/// a route's final destination.
class RouteCache {
public:
    explicit RouteCache(NodeId owner) : owner_(owner) {}

    NodeId owner() const { return owner_; }

    /// Returns false when the route is rejected (malformed, not rooted at the
    /// owner, already present, or transiting a banned node).
    bool insert(const SourceRoute& route);

    /// Minimum-hop route to `dest`; ties favour the earliest insertion.
    std::optional<SourceRoute> select_route(NodeId dest) const;

    bool has_route_to(NodeId dest) const { return select_route(dest).has_value(); }

    /// Drops every route using the directed link from -> to.
    void prune_link(NodeId from, NodeId to);

    /// Drops every route where n appears as an intermediate hop.
    void prune_transit(NodeId n);

    /// prune_transit plus a standing rejection of n as an intermediate.
    void ban_intermediate(NodeId n);

    bool is_banned(NodeId n) const { return banned_.count(n) > 0; }

    std::size_t size() const;
    std::vector<SourceRoute> routes_to(NodeId dest) const;

private:
    struct Entry {
        SourceRoute route;
        std::uint64_t order;
    };

    bool transits_banned(const SourceRoute& route) const;

    NodeId owner_;
    std::uint64_t next_order_ = 0;
    std::map<NodeId, std::vector<Entry>> by_dest_;
    std::set<NodeId> banned_;
};

/// Seen (source, request id) pairs; grows monotonically within one run.
class DedupTable {
public:
    /// Returns true when the pair was new and is now recorded.
    bool check_and_insert(NodeId source, std::uint32_t request_id) {
        return seen_.insert({source, request_id}).second;
    }

    bool contains(NodeId source, std::uint32_t request_id) const {
        return seen_.count({source, request_id}) > 0;
    }

    std::size_t size() const { return seen_.size(); }

private:
    std::set<std::pair<NodeId, std::uint32_t>> seen_;
};

}  // namespace manet
