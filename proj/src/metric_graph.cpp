#include "gbary/metric_graph.hpp"

#include "gbary/error.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <fstream>
#include <istream>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace gbary {

namespace {

class Fnv1a
{
public:
    void bytes(const void* data, std::size_t size) noexcept
    {
        const auto* p = static_cast<const unsigned char*>(data);
        for (std::size_t i = 0; i < size; ++i) {
            state_ ^= p[i];
            state_ *= 0x100000001b3ULL;
        }
    }
    template <typename T>
    void value(const T& v) noexcept
    {
        bytes(&v, sizeof(T));
    }
    std::uint64_t digest() const noexcept { return state_; }

private:
    std::uint64_t state_ = 0xcbf29ce484222325ULL;
};

bool is_comment_or_blank(std::string_view line)
{
    const auto pos = line.find_first_not_of(" \t\r");
    return pos == std::string_view::npos || line[pos] == '#';
}

} // namespace

std::optional<NodeId> MetricGraph::find(std::string_view label) const
{
    const auto it = index_.find(std::string(label));
    if (it == index_.end())
        return std::nullopt;
    return it->second;
}

NodeId MetricGraph::require(std::string_view label) const
{
    if (auto id = find(label))
        return *id;
    throw DataError("unknown node label '" + std::string(label) + "'");
}

std::optional<EdgeId> MetricGraph::find_edge(NodeId a, NodeId b) const
{
    const auto row = neighbors(a);
    const auto it = std::lower_bound(row.begin(), row.end(), b,
                                     [](const HalfEdge& h, NodeId n) { return h.neighbor < n; });
    if (it == row.end() || it->neighbor != b)
        return std::nullopt;
    return it->edge;
}

double MetricGraph::mean_edge_length() const noexcept
{
    if (edges_.empty())
        return 1.0;
    double sum = 0.0;
    for (const auto& e : edges_)
        sum += e.length;
    return sum / static_cast<double>(edges_.size());
}

bool MetricGraph::is_connected() const
{
    const std::size_t n = node_count();
    if (n == 0)
        return false;
    std::vector<char> seen(n, 0);
    std::vector<NodeId> stack{0};
    seen[0] = 1;
    std::size_t reached = 1;
    while (!stack.empty()) {
        const NodeId u = stack.back();
        stack.pop_back();
        for (const auto& h : neighbors(u)) {
            if (!seen[h.neighbor]) {
                seen[h.neighbor] = 1;
                ++reached;
                stack.push_back(h.neighbor);
            }
        }
    }
    return reached == n;
}

std::uint64_t MetricGraph::content_hash() const noexcept
{
    Fnv1a h;
    h.value(static_cast<std::uint64_t>(labels_.size()));
    for (const auto& l : labels_) {
        h.bytes(l.data(), l.size());
        h.value('\0');
    }
    for (const auto& e : edges_) {
        h.value(e.lo);
        h.value(e.hi);
        h.value(std::bit_cast<std::uint64_t>(e.length));
    }
    return h.digest();
}

std::uint32_t GraphBuilder::intern(std::string label)
{
    const auto [it, inserted] = ids_.try_emplace(label, static_cast<std::uint32_t>(names_.size()));
    if (inserted)
        names_.push_back(std::move(label));
    return it->second;
}

void GraphBuilder::add_node(std::string label)
{
    intern(std::move(label));
}

void GraphBuilder::add_edge(std::string u, std::string v, double length)
{
    if (!std::isfinite(length) || length <= 0.0)
        throw std::invalid_argument("edge length must be positive and finite");
    const auto a = intern(std::move(u));
    const auto b = intern(std::move(v));
    if (a == b) {
        ++stats_.self_loops_dropped;
        return;
    }
    raw_.push_back({a, b, length});
}

MetricGraph GraphBuilder::build()
{
    const std::size_t n = names_.size();
    std::vector<std::uint32_t> order(n);
    std::iota(order.begin(), order.end(), 0u);
    std::sort(order.begin(), order.end(),
              [&](std::uint32_t a, std::uint32_t b) { return names_[a] < names_[b]; });
    std::vector<NodeId> dense(n);
    for (std::size_t i = 0; i < n; ++i)
        dense[order[i]] = static_cast<NodeId>(i);

    MetricGraph g;
    g.labels_.reserve(n);
    for (const auto old : order)
        g.labels_.push_back(names_[old]);
    g.index_.reserve(n);
    for (std::size_t i = 0; i < n; ++i)
        g.index_.emplace(g.labels_[i], static_cast<NodeId>(i));

    std::vector<Edge> edges;
    edges.reserve(raw_.size());
    for (const auto& r : raw_) {
        NodeId a = dense[r.u];
        NodeId b = dense[r.v];
        if (a > b)
            std::swap(a, b);
        edges.push_back({a, b, r.length});
    }
    std::sort(edges.begin(), edges.end(), [](const Edge& x, const Edge& y) {
        if (x.lo != y.lo)
            return x.lo < y.lo;
        if (x.hi != y.hi)
            return x.hi < y.hi;
        return x.length < y.length;
    });
    for (const auto& e : edges) {
        if (!g.edges_.empty() && g.edges_.back().lo == e.lo && g.edges_.back().hi == e.hi) {
            ++stats_.parallel_edges_collapsed;
            continue;
        }
        g.edges_.push_back(e);
    }

    std::vector<std::size_t> degree(n, 0);
    for (const auto& e : g.edges_) {
        ++degree[e.lo];
        ++degree[e.hi];
    }
    g.offsets_.assign(n + 1, 0);
    for (std::size_t i = 0; i < n; ++i)
        g.offsets_[i + 1] = g.offsets_[i] + degree[i];
    g.adjacency_.resize(g.offsets_[n]);
    std::vector<std::size_t> cursor(g.offsets_.begin(), g.offsets_.end() - 1);
    for (EdgeId id = 0; id < g.edges_.size(); ++id) {
        const auto& e = g.edges_[id];
        g.adjacency_[cursor[e.lo]++] = {e.hi, id};
        g.adjacency_[cursor[e.hi]++] = {e.lo, id};
    }
    for (std::size_t i = 0; i < n; ++i) {
        std::sort(g.adjacency_.begin() + static_cast<std::ptrdiff_t>(g.offsets_[i]),
                  g.adjacency_.begin() + static_cast<std::ptrdiff_t>(g.offsets_[i + 1]),
                  [](const HalfEdge& a, const HalfEdge& b) { return a.neighbor < b.neighbor; });
    }
    return g;
}

MetricGraph load_graph(std::istream& in, const std::string& source)
{
    GraphBuilder builder;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (is_comment_or_blank(line))
            continue;
        std::istringstream fields(line);
        std::string u, v, len_text, extra;
        if (!(fields >> u >> v >> len_text) || (fields >> extra))
            throw DataError(source, line_no, "malformed edge line, expected '<u> <v> <length>'");
        char* end = nullptr;
        const double length = std::strtod(len_text.c_str(), &end);
        if (end == len_text.c_str() || *end != '\0')
            throw DataError(source, line_no, "edge length '" + len_text + "' is not a number");
        if (!std::isfinite(length) || length <= 0.0)
            throw DataError(source, line_no, "edge length must be positive, got '" + len_text + "'");
        builder.add_edge(std::move(u), std::move(v), length);
    }
    MetricGraph g = builder.build();
    if (g.node_count() == 0)
        throw DataError(source, 0, "empty graph");
    if (builder.stats().self_loops_dropped > 0)
        warn(source + ": dropped " + std::to_string(builder.stats().self_loops_dropped) + " self-loop(s)");
    return g;
}

MetricGraph load_graph_file(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in)
        throw DataError(path.string(), 0, "cannot open graph file");
    return load_graph(in, path.string());
}

MetricGraph induced_subgraph(const MetricGraph& parent, std::span<const NodeId> nodes,
                             std::span<const EdgeId> edges)
{
    GraphBuilder builder;
    for (const auto n : nodes)
        builder.add_node(parent.label(n));
    for (const auto e : edges) {
        const auto& edge = parent.edge(e);
        builder.add_edge(parent.label(edge.lo), parent.label(edge.hi), edge.length);
    }
    return builder.build();
}

void EmpiricalMeasure::add(NodeId n, double weight)
{
    weights_.at(n) += weight;
    total_ += weight;
}

std::vector<NodeId> EmpiricalMeasure::support() const
{
    std::vector<NodeId> out;
    for (NodeId n = 0; n < weights_.size(); ++n)
        if (weights_[n] > 0.0)
            out.push_back(n);
    return out;
}

} // namespace gbary
