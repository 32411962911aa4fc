#include "gbary/shortest_path.hpp"

#include "gbary/error.hpp"

#include <stdexcept>

namespace gbary {

void DijkstraWorkspace::prepare(std::size_t node_count)
{
    if (stamp_.size() != node_count) {
        stamp_.assign(node_count, 0);
        done_.assign(node_count, 0);
        dist_.assign(node_count, 0.0);
        pred_.assign(node_count, kNoNode);
        generation_ = 0;
    }
    if (++generation_ == 0) {
        std::fill(stamp_.begin(), stamp_.end(), 0);
        generation_ = 1;
    }
}

std::vector<double> shortest_distances(const MetricGraph& g, NodeId source)
{
    if (source >= g.node_count())
        throw std::invalid_argument("unknown source node");
    DijkstraWorkspace ws;
    run_dijkstra(g, source, ws, [](NodeId) { return true; }, [](NodeId) { return false; });
    std::vector<double> out(g.node_count());
    for (NodeId n = 0; n < out.size(); ++n)
        out[n] = ws.distance(n);
    return out;
}

std::vector<double> shortest_distances(const MetricGraph& g, NodeId source,
                                       std::span<const NodeId> restrict_to)
{
    if (source >= g.node_count())
        throw std::invalid_argument("unknown source node");
    std::vector<char> allowed(g.node_count(), 0);
    for (const auto n : restrict_to)
        allowed.at(n) = 1;
    if (!allowed[source])
        throw std::invalid_argument("source node is outside the restriction set");
    DijkstraWorkspace ws;
    run_dijkstra(g, source, ws, [&](NodeId v) { return allowed[v] != 0; }, [](NodeId) { return false; });
    std::vector<double> out(g.node_count());
    for (NodeId n = 0; n < out.size(); ++n)
        out[n] = ws.distance(n);
    return out;
}

namespace {

/// Searches from `target` until both ends of the position are settled.
void search_from_target(const MetricGraph& g, const GraphPosition& pos, NodeId target, DijkstraWorkspace& ws)
{
    if (pos.is_node()) {
        const NodeId u = pos.node();
        run_dijkstra(g, target, ws, [](NodeId) { return true; }, [u](NodeId n) { return n == u; });
        return;
    }
    const auto& e = g.edge(pos.edge());
    int remaining = 2;
    run_dijkstra(g, target, ws, [](NodeId) { return true; }, [&](NodeId n) {
        if (n == e.lo || n == e.hi)
            --remaining;
        return remaining == 0;
    });
}

struct Exit
{
    NodeId node;
    double first_segment;
    double total;
};

Exit best_exit(const MetricGraph& g, const GraphPosition& pos, NodeId target, const DijkstraWorkspace& ws)
{
    if (pos.is_node()) {
        const double d = ws.distance(pos.node());
        if (d == kUnreachable)
            throw DataError("node " + g.label(target) + " is unreachable from " + g.label(pos.node()));
        return {pos.node(), 0.0, d};
    }
    const auto& e = g.edge(pos.edge());
    const double x = pos.offset();
    const double via_lo = x + ws.distance(e.lo);
    const double via_hi = (e.length - x) + ws.distance(e.hi);
    if (via_lo == kUnreachable && via_hi == kUnreachable)
        throw DataError("node " + g.label(target) + " is unreachable from " + format_position(g, pos));
    if (via_lo <= via_hi)
        return {e.lo, x, via_lo};
    return {e.hi, e.length - x, via_hi};
}

} // namespace

double distance_from_position(const MetricGraph& g, const GraphPosition& pos, NodeId target,
                              DijkstraWorkspace& ws)
{
    if (pos.is_node() && pos.node() == target)
        return 0.0;
    search_from_target(g, pos, target, ws);
    return best_exit(g, pos, target, ws).total;
}

double distance_from_position(const MetricGraph& g, const GraphPosition& pos, NodeId target)
{
    DijkstraWorkspace ws;
    return distance_from_position(g, pos, target, ws);
}

GeodesicPath geodesic_toward(const MetricGraph& g, const GraphPosition& pos, NodeId target,
                             DijkstraWorkspace& ws)
{
    GeodesicPath path;
    path.start = pos;
    if (pos.is_node() && pos.node() == target)
        return path;
    search_from_target(g, pos, target, ws);
    const Exit exit = best_exit(g, pos, target, ws);
    path.first_segment = exit.first_segment;
    path.length = exit.total;
    for (NodeId n = exit.node; n != kNoNode; n = ws.predecessor(n))
        path.nodes.push_back(n);
    return path;
}

GeodesicPath geodesic_toward(const MetricGraph& g, const GraphPosition& pos, NodeId target)
{
    DijkstraWorkspace ws;
    return geodesic_toward(g, pos, target, ws);
}

GraphPosition GeodesicPath::walk(const MetricGraph& g, double s) const
{
    if (nodes.empty() || !(s > 0.0))
        return start;
    if (s >= length)
        return GraphPosition::at_node(nodes.back());
    double remaining = s;
    if (!start.is_node()) {
        if (remaining < first_segment) {
            const auto& e = g.edge(start.edge());
            const double x = nodes.front() == e.lo ? start.offset() - remaining : start.offset() + remaining;
            return GraphPosition::on_edge(g, start.edge(), x);
        }
        remaining -= first_segment;
    }
    for (std::size_t i = 0; i + 1 < nodes.size(); ++i) {
        const auto e = g.find_edge(nodes[i], nodes[i + 1]);
        const double len = g.edge(*e).length;
        if (remaining < len)
            return GraphPosition::between(g, nodes[i], nodes[i + 1], remaining);
        remaining -= len;
    }
    return GraphPosition::at_node(nodes.back());
}

double frechet_value(const MetricGraph& g, NodeId x, const EmpiricalMeasure& m)
{
    if (!(m.total() > 0.0))
        throw DataError("empty measure");
    const auto dist = shortest_distances(g, x);
    double sum = 0.0;
    for (NodeId y = 0; y < m.node_count(); ++y) {
        const double w = m.weight(y);
        if (w <= 0.0)
            continue;
        if (dist[y] == kUnreachable)
            throw DataError("support node " + g.label(y) + " is unreachable from " + g.label(x));
        sum += dist[y] * dist[y] * w;
    }
    return sum / m.total();
}

} // namespace gbary
