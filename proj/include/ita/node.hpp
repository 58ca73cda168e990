#pragma once

#include <compare>
#include <cstdint>
#include <string_view>

namespace ita {

enum class NodeKind : std::uint8_t { Sensor, Camera, INN, Edge, Cloud, Monitor };

constexpr std::string_view to_string(NodeKind k) noexcept {
    switch (k) {
        case NodeKind::Sensor: return "sensor";
        case NodeKind::Camera: return "camera";
        case NodeKind::INN: return "inn";
        case NodeKind::Edge: return "edge";
        case NodeKind::Cloud: return "cloud";
        case NodeKind::Monitor: return "monitor";
    }
    return "?";
}

struct NodeId {
    std::uint32_t id = 0;
    NodeKind kind = NodeKind::Monitor;

    constexpr bool operator==(const NodeId& o) const noexcept { return id == o.id; }
    constexpr auto operator<=>(const NodeId& o) const noexcept { return id <=> o.id; }
};

}  // namespace ita
