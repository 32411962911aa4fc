#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace gbary {

using NodeId = std::uint32_t;
using EdgeId = std::uint32_t;

inline constexpr NodeId kNoNode = std::numeric_limits<NodeId>::max();
inline constexpr EdgeId kNoEdge = std::numeric_limits<EdgeId>::max();
inline constexpr double kUnreachable = std::numeric_limits<double>::infinity();

/// Absolute tolerance for comparing distances and offsets.
inline constexpr double kDistanceTolerance = 1e-9;

/// Undirected edge stored with `lo < hi`.
struct Edge
{
    NodeId lo = kNoNode;
    NodeId hi = kNoNode;
    double length = 0.0;

    NodeId other(NodeId n) const noexcept { return n == lo ? hi : lo; }
};

struct HalfEdge
{
    NodeId neighbor = kNoNode;
    EdgeId edge = kNoEdge;
};

/// Weighted undirected graph with positive edge lengths.
///
/// Node labels are opaque strings. They are sorted once at construction and
/// mapped to dense indices, so comparing two NodeIds is the same as comparing
/// their labels lexicographically. Adjacency is stored in CSR form, each row
/// sorted by neighbor. Immutable after construction.
class MetricGraph
{
public:
    MetricGraph() = default;

    std::size_t node_count() const noexcept { return labels_.size(); }
    std::size_t edge_count() const noexcept { return edges_.size(); }

    const std::string& label(NodeId n) const { return labels_.at(n); }
    std::span<const std::string> labels() const noexcept { return labels_; }

    std::optional<NodeId> find(std::string_view label) const;
    /// Like find(), but throws DataError naming the label.
    NodeId require(std::string_view label) const;

    std::span<const HalfEdge> neighbors(NodeId n) const noexcept
    {
        return {adjacency_.data() + offsets_[n], adjacency_.data() + offsets_[n + 1]};
    }
    std::size_t degree(NodeId n) const noexcept { return offsets_[n + 1] - offsets_[n]; }

    const Edge& edge(EdgeId e) const { return edges_.at(e); }
    std::span<const Edge> edges() const noexcept { return edges_; }
    std::optional<EdgeId> find_edge(NodeId a, NodeId b) const;

    double mean_edge_length() const noexcept;
    bool is_connected() const;

    /// Stable 64-bit fingerprint of labels, edges and lengths.
    std::uint64_t content_hash() const noexcept;

private:
    friend class GraphBuilder;

    std::vector<std::string> labels_;
    std::unordered_map<std::string, NodeId> index_;
    std::vector<Edge> edges_;
    std::vector<std::size_t> offsets_{0};
    std::vector<HalfEdge> adjacency_;
};

/// Accumulates labelled nodes and edges and produces a MetricGraph.
/// Parallel edges collapse to the minimum length; self-loops are dropped.
class GraphBuilder
{
public:
    struct Stats
    {
        std::size_t self_loops_dropped = 0;
        std::size_t parallel_edges_collapsed = 0;
    };

    void add_node(std::string label);
    /// Throws std::invalid_argument for a nonpositive or non-finite length.
    void add_edge(std::string u, std::string v, double length);

    MetricGraph build();
    const Stats& stats() const noexcept { return stats_; }

private:
    struct RawEdge
    {
        std::uint32_t u;
        std::uint32_t v;
        double length;
    };

    std::uint32_t intern(std::string label);

    std::vector<std::string> names_;
    std::unordered_map<std::string, std::uint32_t> ids_;
    std::vector<RawEdge> raw_;
    Stats stats_;
};

/// Parses the edge-list format: `<u> <v> <length>` per line, `#` comments.
MetricGraph load_graph(std::istream& in, const std::string& source = "<input>");
MetricGraph load_graph_file(const std::filesystem::path& path);

/// Graph on `nodes` (ids of `parent`) with the given parent edges, which must
/// join two of those nodes. Labels are carried over.
MetricGraph induced_subgraph(const MetricGraph& parent, std::span<const NodeId> nodes,
                             std::span<const EdgeId> edges);

/// Node weights built from observation counts.
class EmpiricalMeasure
{
public:
    EmpiricalMeasure() = default;
    explicit EmpiricalMeasure(std::size_t node_count) : weights_(node_count, 0.0) {}

    void add(NodeId n, double weight = 1.0);

    std::size_t node_count() const noexcept { return weights_.size(); }
    double weight(NodeId n) const { return weights_.at(n); }
    double normalized(NodeId n) const { return weights_.at(n) / total_; }
    double total() const noexcept { return total_; }
    std::vector<NodeId> support() const;

private:
    std::vector<double> weights_;
    double total_ = 0.0;
};

} // namespace gbary
