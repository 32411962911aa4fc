#pragma once

#include "gbary/metric_graph.hpp"

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace gbary {

using ClusterId = std::uint32_t;
inline constexpr ClusterId kNoCluster = std::numeric_limits<ClusterId>::max();

/// Assignment of every node to exactly one cluster. Connectivity of the
/// clusters is not implied; see validate_partition().
class Partition
{
public:
    Partition() = default;
    /// `names` defaults to the decimal cluster index.
    Partition(std::vector<ClusterId> assignment, std::size_t cluster_count, std::vector<std::string> names = {});

    std::size_t node_count() const noexcept { return assignment_.size(); }
    std::size_t cluster_count() const noexcept { return members_.size(); }
    ClusterId cluster_of(NodeId n) const { return assignment_.at(n); }
    std::span<const ClusterId> assignment() const noexcept { return assignment_; }
    /// Members in increasing NodeId order.
    std::span<const NodeId> members(ClusterId c) const { return members_.at(c); }
    const std::string& name(ClusterId c) const { return names_.at(c); }

    std::uint64_t content_hash() const noexcept;

private:
    std::vector<ClusterId> assignment_;
    std::vector<std::vector<NodeId>> members_;
    std::vector<std::string> names_;
};

/// Reads `<node> <cluster-id>` lines. Every node of `g` must appear exactly
/// once. Cluster ids are ordered numerically when all are integers,
/// lexicographically otherwise.
Partition load_partition(std::istream& in, const MetricGraph& g, const std::string& source = "<input>");
Partition load_partition_file(const std::filesystem::path& path, const MetricGraph& g);
void write_partition(std::ostream& out, const MetricGraph& g, const Partition& p);

/// k connected clusters of similar size: farthest-point seeds (the first one
/// found by a double sweep from a random node) grown as regions, always
/// extending the currently smallest region by its nearest free node.
Partition balanced_partition(const MetricGraph& g, std::size_t k, std::uint64_t seed);

struct PartitionSizeStats
{
    std::size_t smallest = 0;
    std::size_t largest = 0;
    double imbalance = 0.0; ///< largest / smallest
};
PartitionSizeStats size_stats(const Partition& p);

struct ValidityReport
{
    bool valid = true;
    std::vector<ClusterId> empty_clusters;
    std::vector<ClusterId> disconnected_clusters;
};

/// Checks that every cluster is nonempty and induces a connected sub-graph.
ValidityReport validate_partition(const MetricGraph& g, const Partition& p, unsigned workers = 1);

/// One crossing edge seen from cluster `inner`'s side.
struct BoundaryRecord
{
    NodeId inner = kNoNode;
    NodeId outer = kNoNode;
    double weight = 0.0;
    ClusterId outer_cluster = kNoCluster;
    /// Distance from `inner` to the cluster representative within the cluster.
    std::optional<double> rep_dist;
    /// Index of the mirrored record in the boundary list of `outer_cluster`.
    std::size_t mirror = 0;
};

struct Subgraphs
{
    /// Intra-cluster edges per cluster.
    std::vector<std::vector<EdgeId>> internal_edges;
    /// Boundary records per cluster.
    std::vector<std::vector<BoundaryRecord>> boundaries;
    std::size_t crossing_edges = 0;
};

/// One pass over the edges: intra-cluster edges go to their cluster, every
/// crossing edge yields a record on both sides.
Subgraphs extract_subgraphs(const MetricGraph& g, const Partition& p);

/// The sub-graph G_i as a standalone graph.
MetricGraph cluster_graph(const MetricGraph& g, const Partition& p, const Subgraphs& s, ClusterId c);

} // namespace gbary
