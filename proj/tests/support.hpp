#pragma once

#include "gbary/error.hpp"
#include "gbary/metric_graph.hpp"
#include "gbary/observation_stream.hpp"
#include "gbary/partition.hpp"
#include "gbary/random.hpp"

#include <algorithm>
#include <cstdio>
#include <limits>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

namespace gbary::testing {

inline MetricGraph parse_graph(const std::string& text)
{
    std::istringstream in(text);
    return load_graph(in, "<test>");
}

inline std::string node_name(std::size_t i, std::size_t width = 3)
{
    std::string s = std::to_string(i);
    return "n" + std::string(width > s.size() ? width - s.size() : 0, '0') + s;
}

/// a - b - c, unit edges.
inline MetricGraph p3() { return parse_graph("a b 1\nb c 1\n"); }

/// Hub s with leaves x, y, z.
inline MetricGraph star4() { return parse_graph("s x 1\ns y 1\ns z 1\n"); }

/// Path n000 - n001 - ... with `edges` unit edges.
inline MetricGraph path_graph(std::size_t edges, double length = 1.0)
{
    GraphBuilder b;
    b.add_node(node_name(0));
    for (std::size_t i = 0; i < edges; ++i)
        b.add_edge(node_name(i), node_name(i + 1), length);
    return b.build();
}

inline MetricGraph grid_graph(std::size_t w, std::size_t h)
{
    GraphBuilder b;
    const auto id = [&](std::size_t x, std::size_t y) { return node_name(y * w + x, 7); };
    for (std::size_t y = 0; y < h; ++y)
        for (std::size_t x = 0; x < w; ++x) {
            b.add_node(id(x, y));
            if (x + 1 < w)
                b.add_edge(id(x, y), id(x + 1, y), 1.0);
            if (y + 1 < h)
                b.add_edge(id(x, y), id(x, y + 1), 1.0);
        }
    return b.build();
}

/// Random spanning tree plus `extra` chords, lengths uniform in [lo, hi].
inline MetricGraph random_graph(std::size_t n, std::size_t extra, std::uint64_t seed, double lo = 1.0,
                                double hi = 10.0)
{
    Rng rng(seed);
    std::uniform_real_distribution<double> len(lo, hi);
    GraphBuilder b;
    b.add_node(node_name(0));
    std::set<std::pair<std::size_t, std::size_t>> used;
    for (std::size_t i = 1; i < n; ++i) {
        const std::size_t j = std::uniform_int_distribution<std::size_t>(0, i - 1)(rng);
        used.emplace(j, i);
        b.add_edge(node_name(i), node_name(j), len(rng));
    }
    std::uniform_int_distribution<std::size_t> pick(0, n - 1);
    for (std::size_t added = 0, tries = 0; added < extra && tries < 50 * extra + 100; ++tries) {
        auto u = pick(rng), v = pick(rng);
        if (u == v)
            continue;
        if (u > v)
            std::swap(u, v);
        if (!used.emplace(u, v).second)
            continue;
        b.add_edge(node_name(u), node_name(v), len(rng));
        ++added;
    }
    return b.build();
}

/// All-pairs distances by Floyd-Warshall; independent of the Dijkstra code.
inline std::vector<std::vector<double>> floyd_warshall(const MetricGraph& g)
{
    const std::size_t n = g.node_count();
    const double inf = std::numeric_limits<double>::infinity();
    std::vector<std::vector<double>> d(n, std::vector<double>(n, inf));
    for (std::size_t i = 0; i < n; ++i)
        d[i][i] = 0.0;
    for (const auto& e : g.edges()) {
        d[e.lo][e.hi] = std::min(d[e.lo][e.hi], e.length);
        d[e.hi][e.lo] = std::min(d[e.hi][e.lo], e.length);
    }
    for (std::size_t k = 0; k < n; ++k)
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                if (d[i][k] + d[k][j] < d[i][j])
                    d[i][j] = d[i][k] + d[k][j];
    return d;
}

/// Every node once.
inline std::vector<NodeId> every_node(const MetricGraph& g)
{
    std::vector<NodeId> v(g.node_count());
    for (NodeId i = 0; i < v.size(); ++i)
        v[i] = i;
    return v;
}

inline ObservationStream uniform_stream(const MetricGraph& g, std::uint64_t seed,
                                        ReplayMode mode = ReplayMode::shuffle_replay)
{
    return ObservationStream(every_node(g), mode, seed);
}

/// Random partition into connected clusters: random seeds grown breadth-first in random order.
inline Partition random_partition(const MetricGraph& g, std::size_t k, std::uint64_t seed)
{
    Rng rng(seed);
    std::vector<ClusterId> a(g.node_count(), kNoCluster);
    std::vector<NodeId> order = every_node(g);
    std::shuffle(order.begin(), order.end(), rng);
    std::vector<NodeId> frontier;
    for (ClusterId c = 0; c < k; ++c) {
        a[order[c]] = c;
        frontier.push_back(order[c]);
    }
    while (!frontier.empty()) {
        const std::size_t i = std::uniform_int_distribution<std::size_t>(0, frontier.size() - 1)(rng);
        const NodeId u = frontier[i];
        std::vector<NodeId> free;
        for (const auto& h : g.neighbors(u))
            if (a[h.neighbor] == kNoCluster)
                free.push_back(h.neighbor);
        if (free.empty()) {
            frontier[i] = frontier.back();
            frontier.pop_back();
            continue;
        }
        const NodeId v = free[std::uniform_int_distribution<std::size_t>(0, free.size() - 1)(rng)];
        a[v] = a[u];
        frontier.push_back(v);
    }
    return Partition(std::move(a), k);
}

/// Captures warnings for the lifetime of the object.
class WarningCapture
{
public:
    WarningCapture() : previous_(set_warning_sink(&record)) { messages().clear(); }
    ~WarningCapture() { set_warning_sink(previous_); }
    WarningCapture(const WarningCapture&) = delete;
    WarningCapture& operator=(const WarningCapture&) = delete;

    static std::vector<std::string>& messages()
    {
        static std::vector<std::string> m;
        return m;
    }

private:
    static void record(const std::string& s) { messages().push_back(s); }
    WarningSink previous_;
};

} // namespace gbary::testing
