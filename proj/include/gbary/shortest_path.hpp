#pragma once

#include "gbary/metric_graph.hpp"
#include "gbary/position.hpp"

#include <algorithm>
#include <cstdint>
#include <optional>
#include <span>
#include <utility>
#include <vector>

namespace gbary {

/// Reusable Dijkstra scratch space. Per-node state is invalidated in O(1)
/// between runs through a generation stamp, so repeated short searches on a
/// large graph do not pay for a full reset. One workspace per thread.
class DijkstraWorkspace
{
public:
    void prepare(std::size_t node_count);

    bool reached(NodeId n) const noexcept { return stamp_[n] == generation_; }
    bool settled(NodeId n) const noexcept { return reached(n) && done_[n]; }
    double distance(NodeId n) const noexcept { return reached(n) ? dist_[n] : kUnreachable; }
    /// Next node on a shortest path back to the source; kNoNode at the source.
    NodeId predecessor(NodeId n) const noexcept { return reached(n) ? pred_[n] : kNoNode; }
    NodeId source() const noexcept { return source_; }

    template <typename Allowed, typename Stop>
    friend void run_dijkstra(const MetricGraph&, NodeId, DijkstraWorkspace&, Allowed&&, Stop&&);

private:
    using Entry = std::pair<double, NodeId>;

    void touch(NodeId n, double d, NodeId pred) noexcept
    {
        stamp_[n] = generation_;
        done_[n] = 0;
        dist_[n] = d;
        pred_[n] = pred;
    }

    std::vector<std::uint32_t> stamp_;
    std::vector<char> done_;
    std::vector<double> dist_;
    std::vector<NodeId> pred_;
    std::vector<Entry> heap_;
    std::uint32_t generation_ = 0;
    NodeId source_ = kNoNode;
};

/// Dijkstra from `source` over nodes accepted by `allowed(NodeId)`.
/// `stop(NodeId)` is called as each node is settled; returning true ends the
/// search early. Ties in the heap are broken by NodeId for determinism.
template <typename Allowed, typename Stop>
void run_dijkstra(const MetricGraph& g, NodeId source, DijkstraWorkspace& ws, Allowed&& allowed, Stop&& stop)
{
    ws.prepare(g.node_count());
    ws.source_ = source;
    auto& heap = ws.heap_;
    heap.clear();
    const auto later = [](const DijkstraWorkspace::Entry& a, const DijkstraWorkspace::Entry& b) {
        return a > b;
    };
    ws.touch(source, 0.0, kNoNode);
    heap.emplace_back(0.0, source);
    while (!heap.empty()) {
        std::pop_heap(heap.begin(), heap.end(), later);
        const auto [d, u] = heap.back();
        heap.pop_back();
        if (ws.done_[u] || d > ws.dist_[u])
            continue;
        ws.done_[u] = 1;
        if (stop(u))
            return;
        for (const auto& h : g.neighbors(u)) {
            const NodeId v = h.neighbor;
            if (!allowed(v))
                continue;
            const double nd = d + g.edge(h.edge).length;
            if (!ws.reached(v) || nd < ws.dist_[v]) {
                ws.touch(v, nd, u);
                heap.emplace_back(nd, v);
                std::push_heap(heap.begin(), heap.end(), later);
            }
        }
    }
}

/// Shortest distances from `source`; kUnreachable marks absent nodes.
std::vector<double> shortest_distances(const MetricGraph& g, NodeId source);

/// Shortest distances inside the sub-graph induced by `restrict_to`.
/// Throws std::invalid_argument if `source` is not in the set.
std::vector<double> shortest_distances(const MetricGraph& g, NodeId source,
                                       std::span<const NodeId> restrict_to);

/// Geodesic distance from a point of the continuous graph to a node.
/// Throws DataError when `target` is unreachable.
double distance_from_position(const MetricGraph& g, const GraphPosition& pos, NodeId target,
                              DijkstraWorkspace& ws);
double distance_from_position(const MetricGraph& g, const GraphPosition& pos, NodeId target);

/// Shortest route from a position to a node: a partial first segment from
/// `start` to `nodes.front()`, then whole edges along `nodes`.
struct GeodesicPath
{
    GraphPosition start;
    std::vector<NodeId> nodes;
    double first_segment = 0.0;
    double length = 0.0;

    /// Position reached after walking `s` (clamped to [0, length]).
    GraphPosition walk(const MetricGraph& g, double s) const;
};

GeodesicPath geodesic_toward(const MetricGraph& g, const GraphPosition& pos, NodeId target,
                             DijkstraWorkspace& ws);
GeodesicPath geodesic_toward(const MetricGraph& g, const GraphPosition& pos, NodeId target);

/// Sum over the support of d(x, y)^2 * m(y) / m.total().
/// Throws DataError if some support node is unreachable from x.
double frechet_value(const MetricGraph& g, NodeId x, const EmpiricalMeasure& m);

} // namespace gbary
