#include <algorithm>
#include <limits>
#include <random>
#include <vector>

#include "doctest.h"
#include "manet/sim_core.hpp"

using namespace manet;

namespace {
using IntQueue = EventQueue<int>;
}

TEST_CASE("schedule into empty queue") {
    IntQueue q;
    q.schedule(SimTime(0.0), 1);
    CHECK(q.size() == 1);
    std::vector<double> fired;
    q.run_until(SimTime(1.0), [&](const Event<int>& ev) { fired.push_back(ev.at.seconds()); });
    REQUIRE(fired.size() == 1);
    CHECK(fired[0] == 0.0);
}

TEST_CASE("equal timestamps dispatch in insertion order") {
    IntQueue q;
    q.schedule(SimTime(0.005), 10);
    q.schedule(SimTime(0.005), 20);
    std::vector<int> order;
    q.run_until(SimTime(1.0), [&](const Event<int>& ev) { order.push_back(ev.what); });
    CHECK(order == std::vector<int>{10, 20});
}

TEST_CASE("out-of-order scheduling dispatches by fire time") {
    IntQueue q;
    q.schedule(SimTime(0.003), 3);
    q.schedule(SimTime(0.001), 1);
    std::vector<int> order;
    q.run_until(SimTime(1.0), [&](const Event<int>& ev) { order.push_back(ev.what); });
    CHECK(order == std::vector<int>{1, 3});
}

TEST_CASE("scheduling in the past fails loudly") {
    IntQueue q;
    q.schedule(SimTime(0.5), 1);
    q.run_until(SimTime(1.0), [](const Event<int>&) {});
    CHECK_THROWS_AS(q.schedule(SimTime(0.2), 2), std::logic_error);
}

TEST_CASE("run_until on empty queue advances to the horizon") {
    IntQueue q;
    CHECK(q.run_until(SimTime(60.0), [](const Event<int>&) {}) == 0);
    CHECK(q.now().seconds() == 60.0);
}

TEST_CASE("horizon boundary is inclusive") {
    IntQueue q;
    q.schedule(SimTime(0.001), 1);
    q.schedule(SimTime(0.002), 2);
    q.schedule(SimTime(0.003), 3);
    CHECK(q.run_until(SimTime(0.002), [](const Event<int>&) {}) == 2);
}

TEST_CASE("events scheduled during dispatch are honored within the horizon") {
    IntQueue q;
    std::vector<int> seen;
    q.schedule(SimTime(0.1), 1);
    q.run_until(SimTime(1.0), [&](const Event<int>& ev) {
        seen.push_back(ev.what);
        if (ev.what == 1) q.schedule(q.now() + 0.01, 2);
    });
    CHECK(seen == std::vector<int>{1, 2});
}

TEST_CASE("dispatch order matches a sort oracle under random interleaving") {
    std::mt19937_64 gen(7);
    std::uniform_real_distribution<double> when(0.0, 10.0);
    for (int round = 0; round < 30; ++round) {
        IntQueue q;
        std::vector<std::pair<double, std::uint64_t>> oracle;
        std::vector<std::uint64_t> dispatched;
        int follow_ups = 5;
        for (int i = 0; i < 50; ++i) {
            double t = when(gen);
            std::uint64_t seq = q.schedule(SimTime(t), i);
            oracle.push_back({t, seq});
        }
        double prev = -1.0;
        q.run_until(SimTime(20.0), [&](const Event<int>& ev) {
            CHECK(ev.at.seconds() >= prev);  // time never decreases
            prev = ev.at.seconds();
            dispatched.push_back(ev.seq);
            if (follow_ups-- > 0) {
                double t = q.now().seconds() + when(gen) / 5.0;
                std::uint64_t seq = q.schedule(SimTime(t), 999);
                oracle.push_back({t, seq});
            }
        });
        std::stable_sort(oracle.begin(), oracle.end());
        REQUIRE(dispatched.size() == oracle.size());
        for (std::size_t i = 0; i < oracle.size(); ++i) {
            CHECK(dispatched[i] == oracle[i].second);
        }
    }
}

TEST_CASE("SimTime rejects NaN and negatives") {
    CHECK_THROWS_AS(SimTime(-1.0), std::invalid_argument);
    CHECK_THROWS_AS(SimTime(std::numeric_limits<double>::quiet_NaN()),
                    std::invalid_argument);
}

TEST_CASE("uniform_jitter stays in [lo, hi)") {
    RngStream rng(42);
    for (int i = 0; i < 10000; ++i) {
        double r = uniform_jitter(rng, 0.0, 0.01);
        CHECK(r >= 0.0);
        CHECK(r < 0.01);
    }
}

TEST_CASE("uniform_jitter rejects bad bounds") {
    RngStream rng(1);
    CHECK_THROWS_AS(uniform_jitter(rng, 0.01, 0.01), std::invalid_argument);
    CHECK_THROWS_AS(uniform_jitter(rng, 0.02, 0.01), std::invalid_argument);
    CHECK_THROWS_AS(uniform_jitter(rng, -0.1, 0.01), std::invalid_argument);
}

TEST_CASE("identical seeds draw identical sequences") {
    RngStream a(123456), b(123456);
    for (int i = 0; i < 1000; ++i) {
        CHECK(a.uniform(0.0, 0.01) == b.uniform(0.0, 0.01));
    }
}

TEST_CASE("empirical mean of uniform draws") {
    RngStream rng(99);
    double sum = 0.0;
    const int n = 100000;
    for (int i = 0; i < n; ++i) sum += rng.uniform(0.0, 0.01);
    const double mean = sum / n;
    CHECK(std::abs(mean - 0.005) < 0.0005);
}
