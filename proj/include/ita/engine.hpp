#pragma once

#include <algorithm>
#include <concepts>
#include <cstdint>
#include <functional>
#include <utility>
#include <vector>

#include "ita/errors.hpp"
#include "ita/node.hpp"
#include "ita/sim_time.hpp"

namespace ita {

using EventId = std::uint64_t;

template <class Payload>
struct Event {
    SimTime fire_at;
    EventId seq = 0;
    NodeId target;
    Payload payload;
};

/// Single-threaded discrete-event engine.
///
/// Events fire in (fire_at, seq) order; seq is the global insertion counter,
/// so events scheduled for the same instant run first-scheduled first. There
/// is no cancellation: timers that may go stale carry their own guard.
template <class Payload>
class Engine {
public:
    using EventType = Event<Payload>;
    using Handler = std::function<void(const EventType&)>;

    SimTime now() const noexcept { return now_; }
    std::size_t pending() const noexcept { return queue_.size(); }
    EventId scheduled_count() const noexcept { return next_seq_; }

    EventId schedule(SimTime time, NodeId target, Payload payload) {
        if (time < now_) {
            throw SchedulingInPast("event at t=" + time.str() + " is before now=" + now_.str());
        }
        const EventId id = next_seq_++;
        queue_.push_back(EventType{time, id, target, std::move(payload)});
        std::push_heap(queue_.begin(), queue_.end(), Later{});
        return id;
    }

    /// Observer invoked for every event just before its handler.
    void set_trace(Handler trace) { trace_ = std::move(trace); }

    /// Executes every event with fire_at <= until, then sets now() to until.
    /// Returns the number of events executed.
    template <std::invocable<const EventType&> F>
    std::size_t run(SimTime until, F&& handler) {
        if (until < now_) {
            throw SchedulingInPast("run(" + until.str() + ") is before now=" + now_.str());
        }
        std::size_t executed = 0;
        while (!queue_.empty() && queue_.front().fire_at <= until) {
            executed += step(handler);
        }
        now_ = until;
        return executed;
    }

    /// Executes events until the queue is empty; now() stays at the last event.
    template <std::invocable<const EventType&> F>
    std::size_t run_to_completion(F&& handler) {
        std::size_t executed = 0;
        while (!queue_.empty()) {
            executed += step(handler);
        }
        return executed;
    }

private:
    struct Later {
        bool operator()(const EventType& a, const EventType& b) const noexcept {
            if (a.fire_at != b.fire_at) return a.fire_at > b.fire_at;
            return a.seq > b.seq;
        }
    };

    template <class F>
    std::size_t step(F& handler) {
        std::pop_heap(queue_.begin(), queue_.end(), Later{});
        EventType ev = std::move(queue_.back());
        queue_.pop_back();
        now_ = ev.fire_at;
        if (trace_) trace_(ev);
        handler(ev);
        return 1;
    }

    std::vector<EventType> queue_;  // binary heap under Later
    SimTime now_{};
    EventId next_seq_ = 0;
    Handler trace_;
};

}  // namespace ita
