#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string_view>
#include <vector>

#include "ita/netmodel.hpp"
#include "ita/reading.hpp"
#include "ita/sim_time.hpp"

namespace ita {

enum class Verdict : std::uint8_t { Forward, Drop };

/// Forwarding thresholds for raw readings. All comparisons are strict.
struct RuleSet {
    double temp_threshold = 50.0;
    double humidity_threshold = 30.0;
    double light_threshold = 35.0;
    // Same units as the dataset voltage column (~2-3 V), so this branch is
    // effectively dormant at the default.
    double voltage_threshold = 500.0;

    bool operator==(const RuleSet&) const = default;
};

/// Which predicate a source's readings go through.
enum class RuleMode : std::uint8_t { Rule1, Rule2, Either };

constexpr std::string_view to_string(RuleMode m) noexcept {
    switch (m) {
        case RuleMode::Rule1: return "rule1";
        case RuleMode::Rule2: return "rule2";
        case RuleMode::Either: return "either";
    }
    return "?";
}

/// Forward iff temperature > temp_threshold.
constexpr Verdict rule1(double temperature, const RuleSet& rules) noexcept {
    return temperature > rules.temp_threshold ? Verdict::Forward : Verdict::Drop;
}

/// Forward iff humidity < h || light > l || voltage > v.
constexpr Verdict rule2(double humidity, double light, double voltage, const RuleSet& rules) noexcept {
    return (humidity < rules.humidity_threshold || light > rules.light_threshold ||
            voltage > rules.voltage_threshold)
               ? Verdict::Forward
               : Verdict::Drop;
}

constexpr Verdict evaluate(const SensorReading& r, const RuleSet& rules, RuleMode mode) noexcept {
    const bool r1 = rule1(r.temperature, rules) == Verdict::Forward;
    const bool r2 = rule2(r.humidity, r.light, r.voltage, rules) == Verdict::Forward;
    switch (mode) {
        case RuleMode::Rule1: return r1 ? Verdict::Forward : Verdict::Drop;
        case RuleMode::Rule2: return r2 ? Verdict::Forward : Verdict::Drop;
        case RuleMode::Either: return (r1 || r2) ? Verdict::Forward : Verdict::Drop;
    }
    return Verdict::Drop;
}

/// Rank tables for the decode-and-prioritise stage. Lower rank is served
/// first; anything unmapped gets the lowest priority.
struct PriorityMaps {
    std::map<DataClass, int> class_rank{{DataClass::RawSensor, 0}, {DataClass::ImageFrame, 1}};
    std::map<std::uint32_t, int> source_rank;  // keyed by NodeId::id
};

inline PriorityKey classify(const Message& msg, const PriorityMaps& maps, std::uint64_t arrival_seq) {
    PriorityKey key;
    if (auto it = maps.class_rank.find(msg.data_class); it != maps.class_rank.end()) key.class_rank = it->second;
    if (auto it = maps.source_rank.find(msg.source.id); it != maps.source_rank.end()) key.source_rank = it->second;
    key.arrival_seq = arrival_seq;
    return key;
}

enum class OverflowPolicy : std::uint8_t { Forward, Drop };

struct EdgeParams {
    SimTime analytics_deadline = SimTime::from_seconds(1);
    std::size_t buffer_storage = 20;
    SimTime algorithm_time = SimTime::from_micros(10'000);
    OverflowPolicy overflow = OverflowPolicy::Forward;

    bool operator==(const EdgeParams&) const = default;
};

struct DeadlineTimer {
    SimTime at;
    std::uint64_t epoch = 0;
};

/// What the caller must do after an edge state transition. When both are
/// set, the deadline is scheduled before the completion.
struct EdgeEffects {
    std::vector<Message> to_cloud;  // forwarded unprocessed, in priority order
    std::optional<DeadlineTimer> schedule_deadline;
    std::optional<SimTime> schedule_completion;
    std::optional<Message> completed;  // absorbed at the edge
    bool dropped = false;
};

struct EdgeCounters {
    std::uint64_t images_received = 0;
    std::uint64_t processed = 0;
    std::uint64_t flushed = 0;
    std::uint64_t overflow_forwarded = 0;
    std::uint64_t overflow_dropped = 0;
    std::uint64_t deadline_flushes = 0;
    std::uint64_t raw_received = 0;
    std::uint64_t raw_forwarded = 0;
    std::uint64_t raw_dropped = 0;
    SimTime compute_time;  // rule evaluation plus image processing
};

/// Edge analytics for image frames: a bounded priority buffer drained one item
/// at a time, guarded by a deadline timer that restarts with every busy period.
///
/// When the timer fires while the node is still busy, everything buffered goes
/// to the cloud unprocessed and the timer is re-armed. The in-service item is
/// never aborted. A timer whose epoch no longer matches is stale and ignored.
class EdgeNode {
public:
    explicit EdgeNode(EdgeParams params = {}) : params_(params) {}

    const EdgeParams& params() const noexcept { return params_; }
    const EdgeCounters& counters() const noexcept { return counters_; }
    std::size_t buffered() const noexcept { return buffer_.size(); }
    bool busy() const noexcept { return in_service_.has_value(); }
    std::uint64_t epoch() const noexcept { return epoch_; }

    /// Rule-engine path for raw readings; bypasses the image buffer.
    Verdict on_raw(const SensorReading& reading, const RuleSet& rules, RuleMode mode) {
        ++counters_.raw_received;
        counters_.compute_time += params_.algorithm_time;
        const Verdict v = evaluate(reading, rules, mode);
        ++(v == Verdict::Forward ? counters_.raw_forwarded : counters_.raw_dropped);
        return v;
    }

    EdgeEffects on_image(Message msg, SimTime now) {
        ++counters_.images_received;
        EdgeEffects fx;
        if (buffer_.size() >= params_.buffer_storage) {
            if (params_.overflow == OverflowPolicy::Forward) {
                ++counters_.overflow_forwarded;
                fx.to_cloud.push_back(std::move(msg));
            } else {
                ++counters_.overflow_dropped;
                fx.dropped = true;
            }
            return fx;
        }
        if (!buffer_.insert(Entry{std::move(msg)}).second) throw BadParams("duplicate priority key at edge");
        if (!busy()) {
            ++epoch_;
            fx.schedule_deadline = DeadlineTimer{now + params_.analytics_deadline, epoch_};
            fx.schedule_completion = start_next(now);
        }
        return fx;
    }

    EdgeEffects on_completion(SimTime now) {
        EdgeEffects fx;
        if (!in_service_) return fx;
        Message done = std::move(*in_service_);
        in_service_.reset();
        done.processed_at_edge = true;
        ++counters_.processed;
        counters_.compute_time += params_.algorithm_time;
        fx.completed = std::move(done);
        if (!buffer_.empty()) {
            fx.schedule_completion = start_next(now);
        } else {
            ++epoch_;  // busy period over; outstanding timer is now stale
        }
        return fx;
    }

    EdgeEffects on_deadline(std::uint64_t epoch, SimTime now) {
        EdgeEffects fx;
        if (epoch != epoch_ || !busy()) return fx;
        if (!buffer_.empty()) {
            ++counters_.deadline_flushes;
            for (auto& e : buffer_) {
                fx.to_cloud.push_back(e.msg);
            }
            counters_.flushed += buffer_.size();
            buffer_.clear();
        }
        ++epoch_;
        fx.schedule_deadline = DeadlineTimer{now + params_.analytics_deadline, epoch_};
        return fx;
    }

private:
    struct Entry {
        Message msg;
        bool operator<(const Entry& o) const noexcept { return msg.priority < o.msg.priority; }
    };

    SimTime start_next(SimTime now) {
        auto it = buffer_.begin();
        in_service_ = std::move(buffer_.extract(it).value().msg);
        return now + params_.algorithm_time;
    }

    EdgeParams params_;
    std::set<Entry> buffer_;
    std::optional<Message> in_service_;
    std::uint64_t epoch_ = 0;
    EdgeCounters counters_;
};

enum class Path : std::uint8_t { Edge = 0, INN = 1 };

constexpr std::string_view to_string(Path p) noexcept { return p == Path::Edge ? "edge" : "inn"; }

/// Cloud-side storage and processing cost, split by the path a message took.
struct CloudState {
    SimTime algorithm_time = SimTime::from_micros(10'000);
    std::array<std::uint64_t, 2> stored_bytes{};
    std::array<std::uint64_t, 2> processed_msgs{};
    std::array<SimTime, 2> compute_time{};

    void on_receive(const Message& msg, Path via) {
        const auto i = static_cast<std::size_t>(via);
        stored_bytes[i] += msg.size;
        processed_msgs[i] += 1;
        compute_time[i] += algorithm_time;
    }

    std::uint64_t bytes(Path p) const { return stored_bytes[static_cast<std::size_t>(p)]; }
    std::uint64_t messages(Path p) const { return processed_msgs[static_cast<std::size_t>(p)]; }
    SimTime compute(Path p) const { return compute_time[static_cast<std::size_t>(p)]; }
};

}  // namespace ita
