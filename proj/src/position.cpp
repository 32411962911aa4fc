#include "gbary/position.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace gbary {

GraphPosition GraphPosition::at_node(NodeId n) noexcept
{
    GraphPosition p;
    p.node_ = n;
    return p;
}

GraphPosition GraphPosition::on_edge(const MetricGraph& g, EdgeId e, double offset_from_lo)
{
    const auto& edge = g.edge(e);
    if (!(offset_from_lo > 0.0))
        return at_node(edge.lo);
    if (!(offset_from_lo < edge.length))
        return at_node(edge.hi);
    GraphPosition p;
    p.edge_ = e;
    p.offset_ = offset_from_lo;
    return p;
}

GraphPosition GraphPosition::between(const MetricGraph& g, NodeId from, NodeId to, double offset)
{
    const auto e = g.find_edge(from, to);
    if (!e)
        throw std::invalid_argument("nodes " + g.label(from) + " and " + g.label(to) + " are not adjacent");
    const auto& edge = g.edge(*e);
    return on_edge(g, *e, from == edge.lo ? offset : edge.length - offset);
}

bool is_valid(const MetricGraph& g, const GraphPosition& pos) noexcept
{
    if (pos.is_node())
        return pos.node() < g.node_count();
    if (pos.edge() >= g.edge_count())
        return false;
    const double x = pos.offset();
    return x > 0.0 && x < g.edges()[pos.edge()].length;
}

NodeId nearest_node(const MetricGraph& g, const GraphPosition& pos)
{
    if (pos.is_node())
        return pos.node();
    const auto& e = g.edge(pos.edge());
    const double half = e.length / 2.0;
    if (pos.offset() < half)
        return e.lo;
    if (pos.offset() > half)
        return e.hi;
    return e.lo; // lo < hi, so the tie goes to the smaller label
}

std::string format_position(const MetricGraph& g, const GraphPosition& pos)
{
    std::ostringstream out;
    out.precision(17);
    if (pos.is_node()) {
        out << "node:" << g.label(pos.node());
    } else {
        const auto& e = g.edge(pos.edge());
        out << "edge:" << g.label(e.lo) << ',' << g.label(e.hi) << ',' << pos.offset();
    }
    return out.str();
}

} // namespace gbary
