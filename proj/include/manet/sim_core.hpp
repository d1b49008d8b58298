#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <random>
#include <utility>
#include <vector>

namespace manet {

/// Simulation clock value in seconds. Construction rejects NaN and negative
/// values, so comparisons between live SimTime instances are total.
class SimTime {
public:
    constexpr SimTime() = default;

    explicit SimTime(double seconds) : s_(seconds) {
        if (!(seconds >= 0.0)) {
            throw std::invalid_argument("SimTime: seconds must be finite and >= 0");
        }
    }

    double seconds() const { return s_; }

    SimTime operator+(double dt) const { return SimTime(s_ + dt); }
    double operator-(SimTime other) const { return s_ - other.s_; }

    friend bool operator==(SimTime a, SimTime b) { return a.s_ == b.s_; }
    friend bool operator!=(SimTime a, SimTime b) { return a.s_ != b.s_; }
    friend bool operator<(SimTime a, SimTime b) { return a.s_ < b.s_; }
    friend bool operator<=(SimTime a, SimTime b) { return a.s_ <= b.s_; }
    friend bool operator>(SimTime a, SimTime b) { return a.s_ > b.s_; }
    friend bool operator>=(SimTime a, SimTime b) { return a.s_ >= b.s_; }

private:
    double s_ = 0.0;
};

template <typename Payload>
struct Event {
    SimTime at;
    std::uint64_t seq = 0;  // insertion counter, breaks timestamp ties FIFO
    Payload what;
};

/// Time-ordered event scheduler. Dispatch order is strictly lexicographic in
/// (fire time, insertion sequence), so runs are reproducible regardless of
/// how handlers interleave further scheduling.
template <typename Payload>
class EventQueue {
public:
    std::uint64_t schedule(SimTime at, Payload what) {
        if (at < now_) {
            throw std::logic_error("EventQueue::schedule: event in the past");
        }
        const std::uint64_t seq = next_seq_++;
        heap_.push_back(Event<Payload>{at, seq, std::move(what)});
        std::push_heap(heap_.begin(), heap_.end(), later);
        return seq;
    }

    /// Dispatches every event with fire time <= horizon, including events the
    /// handler schedules along the way. The clock ends at the horizon.
    template <typename Handler>
    std::uint64_t run_until(SimTime horizon, Handler&& handle) {
        if (horizon < now_) {
            throw std::logic_error("EventQueue::run_until: horizon in the past");
        }
        std::uint64_t dispatched = 0;
        while (!heap_.empty() && heap_.front().at <= horizon) {
            std::pop_heap(heap_.begin(), heap_.end(), later);
            Event<Payload> ev = std::move(heap_.back());
            heap_.pop_back();
            now_ = ev.at;
            ++dispatched;
            handle(ev);
        }
        now_ = horizon;
        return dispatched;
    }

    SimTime now() const { return now_; }
    bool empty() const { return heap_.empty(); }
    std::size_t size() const { return heap_.size(); }

private:
    // std heaps are max-heaps; "later" puts the earliest (at, seq) on top.
    static bool later(const Event<Payload>& a, const Event<Payload>& b) {
        if (a.at != b.at) return b.at < a.at;
        return b.seq < a.seq;
    }

    std::vector<Event<Payload>> heap_;
    SimTime now_{};
    std::uint64_t next_seq_ = 0;
};

/// Seeded uniform random stream. mt19937_64 plus explicit 53-bit scaling keeps
/// the draw sequence identical across platforms and standard libraries.
class RngStream {
public:
    explicit RngStream(std::uint64_t seed) : seed_(seed), gen_(seed) {}

    std::uint64_t seed() const { return seed_; }

    /// Uniform draw in [lo, hi). Requires 0 <= lo < hi.
    double uniform(double lo, double hi) {
        if (!(lo >= 0.0) || !(lo < hi)) {
            throw std::invalid_argument("RngStream::uniform: need 0 <= lo < hi");
        }
        const double u = static_cast<double>(gen_() >> 11) * 0x1.0p-53;
        double r = lo + u * (hi - lo);
        if (r >= hi) r = std::nextafter(hi, lo);
        return r;
    }

private:
    std::uint64_t seed_;
    std::mt19937_64 gen_;
};

inline double uniform_jitter(RngStream& rng, double lo, double hi) {
    return rng.uniform(lo, hi);
}

}  // namespace manet
