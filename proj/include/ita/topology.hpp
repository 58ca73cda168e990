#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ita/config.hpp"
#include "ita/netmodel.hpp"
#include "ita/sources.hpp"

namespace ita {

struct SourceNode {
    SourceSpec spec;
    NodeId node;
    LinkId to_inn;
    LinkId to_edge;
};

/// The two-path layout: every source feeds both the INN and the Edge, and
/// both of those feed the cloud. The monitor has no links.
struct Topology {
    NodeId inn;
    NodeId edge;
    NodeId cloud;
    NodeId monitor;
    LinkId inn_to_cloud;
    LinkId edge_to_cloud;
    std::vector<SourceNode> sources;
};

template <DeliveryPayload Payload>
SourceNode attach_source(Topology& topo, Network<Payload>& net, const LinkRates& rates, SourceSpec spec) {
    spec.validate();
    const NodeKind kind = spec.kind == SourceKind::Sensor ? NodeKind::Sensor : NodeKind::Camera;
    const NodeId node = net.add_node(kind, spec.name);
    SourceNode sn{std::move(spec), node, {}, {}};
    sn.to_inn = net.connect(node, topo.inn, rates.source_to_inn.rate_bps, rates.source_to_inn.prop_delay);
    sn.to_edge = net.connect(node, topo.edge, rates.source_to_edge.rate_bps, rates.source_to_edge.prop_delay);
    topo.sources.push_back(sn);
    return sn;
}

template <DeliveryPayload Payload>
Topology build_topology(const Config& cfg, Network<Payload>& net) {
    try {
        validate(cfg);
    } catch (const ConfigError& e) {
        throw ConfigError(e.key(), std::string("invalid topology config: ") + e.what());
    }
    Topology topo;
    topo.inn = net.add_node(NodeKind::INN, "inn");
    topo.edge = net.add_node(NodeKind::Edge, "edge");
    topo.cloud = net.add_node(NodeKind::Cloud, "cloud");
    topo.monitor = net.add_node(NodeKind::Monitor, "monitor");
    topo.inn_to_cloud =
        net.connect(topo.inn, topo.cloud, cfg.links.inn_to_cloud.rate_bps, cfg.links.inn_to_cloud.prop_delay);
    topo.edge_to_cloud =
        net.connect(topo.edge, topo.cloud, cfg.links.edge_to_cloud.rate_bps, cfg.links.edge_to_cloud.prop_delay);
    for (const auto& spec : cfg.sources) {
        attach_source(topo, net, cfg.links, spec);
    }
    return topo;
}

}  // namespace ita
