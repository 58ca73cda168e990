#pragma once

#include <compare>
#include <concepts>
#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ita/engine.hpp"
#include "ita/errors.hpp"
#include "ita/node.hpp"
#include "ita/reading.hpp"
#include "ita/sim_time.hpp"

namespace ita {

enum class DataClass : std::uint8_t { RawSensor, ImageFrame };

constexpr std::string_view to_string(DataClass c) noexcept {
    return c == DataClass::RawSensor ? "raw_sensor" : "image_frame";
}

/// Processing order at the edge: data class first, then source, then arrival.
/// Smaller keys are served first.
struct PriorityKey {
    int class_rank = std::numeric_limits<int>::max();
    int source_rank = std::numeric_limits<int>::max();
    std::uint64_t arrival_seq = 0;

    auto operator<=>(const PriorityKey&) const = default;
};

struct Message {
    std::uint64_t msg_id = 0;
    NodeId source;
    DataClass data_class = DataClass::RawSensor;
    std::uint64_t size = 0;  // bytes
    SimTime created_at;
    bool processed_at_edge = false;
    PriorityKey priority;
    std::optional<SensorReading> body;  // RawSensor only

    bool operator==(const Message&) const = default;
};

struct LinkId {
    std::uint32_t value = 0;
    auto operator<=>(const LinkId&) const = default;
};

/// Store-and-forward channel: one message serializes at a time.
struct Link {
    NodeId from;
    NodeId to;
    std::uint64_t rate_bps = 0;
    SimTime prop_delay;
    SimTime busy_until;
    std::uint64_t bytes_sent = 0;
    std::uint64_t messages_sent = 0;
};

/// Serialization time of `bytes` at `rate_bps`, rounded up to the next microsecond.
inline SimTime transmission_time(std::uint64_t bytes, std::uint64_t rate_bps) {
    if (rate_bps == 0) throw BadParams("link rate must be positive");
    const unsigned __int128 bit_micros = static_cast<unsigned __int128>(bytes) * 8u * SimTime::kMicrosPerSecond;
    const unsigned __int128 us = (bit_micros + rate_bps - 1) / rate_bps;
    return SimTime::from_micros(static_cast<std::int64_t>(us));
}

/// Payloads that can carry a message arriving over a link.
template <class P>
concept DeliveryPayload = requires(Message m, LinkId l) {
    { P::delivery(std::move(m), l) } -> std::same_as<P>;
};

struct NodeInfo {
    NodeId id;
    std::string name;
};

/// Nodes and point-to-point links of one simulation run.
template <DeliveryPayload Payload>
class Network {
public:
    NodeId add_node(NodeKind kind, std::string name) {
        const NodeId id{static_cast<std::uint32_t>(nodes_.size()), kind};
        nodes_.push_back(NodeInfo{id, std::move(name)});
        return id;
    }

    const std::vector<NodeInfo>& nodes() const noexcept { return nodes_; }

    const NodeInfo& node(NodeId id) const {
        if (id.id >= nodes_.size()) throw UnknownNode("node " + std::to_string(id.id));
        return nodes_[id.id];
    }

    LinkId connect(NodeId from, NodeId to, std::uint64_t rate_bps, SimTime prop_delay = {}) {
        require_node(from);
        require_node(to);
        if (rate_bps == 0) throw BadParams("link rate must be positive");
        if (by_ends_.contains({from.id, to.id})) {
            throw DuplicateLink("link " + nodes_[from.id].name + " -> " + nodes_[to.id].name + " already exists");
        }
        const LinkId id{static_cast<std::uint32_t>(links_.size())};
        links_.push_back(Link{nodes_[from.id].id, nodes_[to.id].id, rate_bps, prop_delay, SimTime{}, 0, 0});
        by_ends_.emplace(std::make_pair(from.id, to.id), id);
        return id;
    }

    std::optional<LinkId> find_link(NodeId from, NodeId to) const {
        auto it = by_ends_.find({from.id, to.id});
        if (it == by_ends_.end()) return std::nullopt;
        return it->second;
    }

    const Link& link(LinkId id) const {
        if (id.value >= links_.size()) throw UnknownLink("link " + std::to_string(id.value));
        return links_[id.value];
    }

    std::size_t link_count() const noexcept { return links_.size(); }

    /// Queues `msg` on the link and schedules its delivery to the far end.
    /// Serialization starts at max(depart, busy_until); returns the arrival time.
    SimTime transmit(Engine<Payload>& engine, LinkId id, Message msg, SimTime depart) {
        if (id.value >= links_.size()) throw UnknownLink("link " + std::to_string(id.value));
        if (msg.size == 0) throw BadParams("message size must be positive");
        Link& l = links_[id.value];
        const SimTime start = std::max(depart, l.busy_until);
        const SimTime finish = start + transmission_time(msg.size, l.rate_bps);
        const SimTime arrival = finish + l.prop_delay;
        l.busy_until = finish;
        l.bytes_sent += msg.size;
        ++l.messages_sent;
        engine.schedule(arrival, l.to, Payload::delivery(std::move(msg), id));
        return arrival;
    }

private:
    void require_node(NodeId id) const {
        if (id.id >= nodes_.size()) throw UnknownNode("node " + std::to_string(id.id));
    }

    std::vector<NodeInfo> nodes_;
    std::vector<Link> links_;
    std::map<std::pair<std::uint32_t, std::uint32_t>, LinkId> by_ends_;
};

}  // namespace ita
