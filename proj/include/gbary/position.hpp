#pragma once

#include "gbary/metric_graph.hpp"

#include <string>

namespace gbary {

/// A point of the continuous graph: a node, or a point strictly inside an
/// edge. Edge-interior offsets are measured from the edge's smaller endpoint
/// (`Edge::lo`), which makes the representation canonical.
class GraphPosition
{
public:
    GraphPosition() = default;

    static GraphPosition at_node(NodeId n) noexcept;
    /// Offsets at or beyond the edge ends collapse to the endpoint node.
    static GraphPosition on_edge(const MetricGraph& g, EdgeId e, double offset_from_lo);
    /// Point at distance `offset` from `from` on the edge (from, to).
    /// Throws std::invalid_argument if the two nodes are not adjacent.
    static GraphPosition between(const MetricGraph& g, NodeId from, NodeId to, double offset);

    bool is_node() const noexcept { return edge_ == kNoEdge; }
    NodeId node() const noexcept { return node_; }
    EdgeId edge() const noexcept { return edge_; }
    double offset() const noexcept { return offset_; }

    friend bool operator==(const GraphPosition&, const GraphPosition&) = default;

private:
    NodeId node_ = kNoNode;
    EdgeId edge_ = kNoEdge;
    double offset_ = 0.0;
};

bool is_valid(const MetricGraph& g, const GraphPosition& pos) noexcept;

/// Nearest node; a midpoint tie goes to the smaller NodeId (= smaller label).
NodeId nearest_node(const MetricGraph& g, const GraphPosition& pos);

/// `node:<label>` or `edge:<lo>,<hi>,<offset>`.
std::string format_position(const MetricGraph& g, const GraphPosition& pos);

} // namespace gbary
