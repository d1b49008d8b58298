#include "manet/route_cache.hpp"

#include <algorithm>

namespace manet {

bool RouteCache::transits_banned(const SourceRoute& route) const {
    for (NodeId b : banned_) {
        if (route.contains_intermediate(b)) return true;
    }
    return false;
}

bool RouteCache::insert(const SourceRoute& route) {
    if (!route.valid()) return false;
    if (route.hops.front() != owner_) return false;
    if (transits_banned(route)) return false;
    auto& entries = by_dest_[route.hops.back()];
    for (const Entry& e : entries) {
        if (e.route == route) return false;
    }
    entries.push_back(Entry{route, next_order_++});
    return true;
}

std::optional<SourceRoute> RouteCache::select_route(NodeId dest) const {
    auto it = by_dest_.find(dest);
    if (it == by_dest_.end()) return std::nullopt;
    const Entry* best = nullptr;
    for (const Entry& e : it->second) {
        if (!best || e.route.hop_count() < best->route.hop_count() ||
            (e.route.hop_count() == best->route.hop_count() && e.order < best->order)) {
            best = &e;
        }
    }
    if (!best) return std::nullopt;
    return best->route;
}

void RouteCache::prune_link(NodeId from, NodeId to) {
    for (auto& [dest, entries] : by_dest_) {
        entries.erase(std::remove_if(entries.begin(), entries.end(),
                                     [&](const Entry& e) {
                                         return e.route.uses_link(from, to);
                                     }),
                      entries.end());
    }
}

void RouteCache::prune_transit(NodeId n) {
    for (auto& [dest, entries] : by_dest_) {
        entries.erase(std::remove_if(entries.begin(), entries.end(),
                                     [&](const Entry& e) {
                                         return e.route.contains_intermediate(n);
                                     }),
                      entries.end());
    }
}

void RouteCache::ban_intermediate(NodeId n) {
    banned_.insert(n);
    prune_transit(n);
}

std::size_t RouteCache::size() const {
    std::size_t n = 0;
    for (const auto& [dest, entries] : by_dest_) n += entries.size();
    return n;
}

std::vector<SourceRoute> RouteCache::routes_to(NodeId dest) const {
    std::vector<SourceRoute> out;
    auto it = by_dest_.find(dest);
    if (it == by_dest_.end()) return out;
    for (const Entry& e : it->second) out.push_back(e.route);
    return out;
}

}  // namespace manet
