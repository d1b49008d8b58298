#include "doctest.h"
#include "manet/route_cache.hpp"

using namespace manet;

namespace {
SourceRoute route(std::initializer_list<NodeId> hops) {
    return SourceRoute{std::vector<NodeId>(hops)};
}
}  // namespace

TEST_CASE("select_route picks minimum hop count") {
    RouteCache c(0);
    REQUIRE(c.insert(route({0, 2, 3, 5})));
    REQUIRE(c.insert(route({0, 1, 5})));
    auto r = c.select_route(5);
    REQUIRE(r.has_value());
    CHECK(r->hops == std::vector<NodeId>{0, 1, 5});
}

TEST_CASE("empty cache yields nothing") {
    RouteCache c(0);
    CHECK_FALSE(c.select_route(5).has_value());
}

TEST_CASE("equal hop counts break ties by earliest insertion") {
    RouteCache c(0);
    REQUIRE(c.insert(route({0, 1, 5})));
    REQUIRE(c.insert(route({0, 2, 5})));
    auto r = c.select_route(5);
    REQUIRE(r.has_value());
    CHECK(r->hops == std::vector<NodeId>{0, 1, 5});
}

TEST_CASE("insert rejects malformed or foreign routes") {
    RouteCache c(0);
    CHECK_FALSE(c.insert(route({0})));           // too short
    CHECK_FALSE(c.insert(route({1, 2, 3})));     // not rooted at owner
    CHECK_FALSE(c.insert(route({0, 1, 1, 2})));  // repeated hop
    REQUIRE(c.insert(route({0, 1, 2})));
    CHECK_FALSE(c.insert(route({0, 1, 2})));     // duplicate entry
    CHECK(c.size() == 1);
}

TEST_CASE("prune_link removes exactly the routes using the directed link") {
    RouteCache c(0);
    REQUIRE(c.insert(route({0, 3, 7, 10})));
    REQUIRE(c.insert(route({0, 2, 9, 10})));
    c.prune_link(3, 7);
    auto remaining = c.routes_to(10);
    REQUIRE(remaining.size() == 1);
    CHECK(remaining[0].hops == std::vector<NodeId>{0, 2, 9, 10});
    // absent link: no-op
    c.prune_link(4, 6);
    CHECK(c.routes_to(10).size() == 1);
    // reverse direction is a different link
    c.prune_link(9, 2);
    CHECK(c.routes_to(10).size() == 1);
}

TEST_CASE("ban_intermediate prunes transits but keeps destination routes") {
    RouteCache c(0);
    REQUIRE(c.insert(route({0, 3, 7, 10})));
    REQUIRE(c.insert(route({0, 3, 7})));  // 7 as destination
    c.ban_intermediate(7);
    CHECK(c.routes_to(10).empty());
    REQUIRE(c.routes_to(7).size() == 1);
    CHECK(c.is_banned(7));
    CHECK_FALSE(c.insert(route({0, 7, 10})));  // future transit rejected
    CHECK(c.insert(route({0, 3, 10})));
}

TEST_CASE("lookup never returns a route transiting a banned node") {
    RouteCache c(0);
    c.ban_intermediate(4);
    for (NodeId mid = 1; mid <= 6; ++mid) {
        c.insert(route({0, mid, 9}));
    }
    for (int dest : {9}) {
        auto r = c.select_route(dest);
        REQUIRE(r.has_value());
        CHECK_FALSE(r->contains_intermediate(4));
    }
    CHECK(c.routes_to(9).size() == 5);
}

TEST_CASE("dedup table grows monotonically") {
    DedupTable t;
    CHECK(t.check_and_insert(0, 0));
    CHECK_FALSE(t.check_and_insert(0, 0));
    CHECK(t.check_and_insert(0, 1));
    CHECK(t.check_and_insert(3, 0));
    CHECK(t.contains(0, 0));
    CHECK_FALSE(t.contains(9, 9));
    CHECK(t.size() == 3);
}

TEST_CASE("source route helpers") {
    SourceRoute r = route({0, 3, 7, 10});
    CHECK(r.valid());
    CHECK(r.hop_count() == 3);
    CHECK(r.contains(7));
    CHECK(r.contains_intermediate(3));
    CHECK_FALSE(r.contains_intermediate(0));
    CHECK_FALSE(r.contains_intermediate(10));
    CHECK(r.uses_link(3, 7));
    CHECK_FALSE(r.uses_link(7, 3));
    REQUIRE(r.index_of(7).has_value());
    CHECK(*r.index_of(7) == 2);
    CHECK(r.reversed_prefix(2).hops == std::vector<NodeId>{7, 3, 0});
}
