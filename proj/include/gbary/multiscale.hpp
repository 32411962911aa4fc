#pragma once

#include "gbary/annealing.hpp"
#include "gbary/metric_graph.hpp"
#include "gbary/observation_stream.hpp"
#include "gbary/partition.hpp"
#include "gbary/shortest_path.hpp"

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace gbary {

enum class RepresentativeStrategy
{
    random,                 ///< uniform node of each cluster
    per_cluster_barycenter, ///< annealing estimate on each cluster sub-graph
};

std::string_view to_string(RepresentativeStrategy s) noexcept;
std::optional<RepresentativeStrategy> parse_strategy(std::string_view text) noexcept;

/// One representative per cluster (ids of `g`). For the barycenter strategy
/// each cluster is annealed on its own sub-graph with the observations that
/// fall in it; a cluster without observations falls back to the uniform
/// measure on its nodes.
std::vector<NodeId> choose_representatives(const MetricGraph& g, const Partition& p, const Subgraphs& s,
                                           RepresentativeStrategy strategy, const ObservationStream& stream,
                                           const ScheduleOptions& schedule, std::uint64_t seed, unsigned workers = 1);

/// Fills rep_dist of cluster `c`'s boundary records with distances from the
/// representative inside the cluster.
void fill_boundary_distances(const MetricGraph& g, const Partition& p, std::span<const NodeId> representatives,
                             ClusterId c, std::vector<BoundaryRecord>& records, DijkstraWorkspace& ws);
void fill_boundary_distances(const MetricGraph& g, const Partition& p, std::span<const NodeId> representatives,
                             Subgraphs& s, unsigned workers = 1);

struct UpscaleEdge
{
    ClusterId a = kNoCluster; ///< a < b
    ClusterId b = kNoCluster;
    double length = 0.0;
};

/// Edges between neighboring clusters: for every crossing edge, weight plus
/// the representative distances on both sides, minimized per cluster pair.
std::vector<UpscaleEdge> build_upscale_edges(const Subgraphs& s);

struct UpscaleGraph
{
    MetricGraph graph;
    std::vector<NodeId> representatives;  ///< cluster -> node of the full graph
    std::vector<NodeId> node_of_cluster;  ///< cluster -> node of `graph`
    std::vector<ClusterId> rep_cluster;   ///< node of `graph` -> cluster
    std::vector<UpscaleEdge> edges;
};

/// Throws DataError when the result is disconnected.
UpscaleGraph build_upscale_graph(const MetricGraph& g, const Partition& p, const Subgraphs& s,
                                 std::span<const NodeId> representatives);
UpscaleGraph upscale_graph_from_edges(const MetricGraph& g, const Partition& p,
                                      std::span<const NodeId> representatives, std::vector<UpscaleEdge> edges);

struct MultiscaleGraph
{
    MetricGraph graph;
    ClusterId central = kNoCluster;
    std::vector<NodeId> original;   ///< node of `graph` -> node of the full graph
    std::vector<NodeId> local;      ///< node of the full graph -> node of `graph` (kNoNode if absent)
};

/// Central cluster at full resolution, other clusters as representatives.
/// Border edges join a central boundary node to the neighboring
/// representative with length weight + far-side rep_dist.
MultiscaleGraph build_multiscale_graph(const MetricGraph& g, const Partition& p, const Subgraphs& s,
                                       const UpscaleGraph& upscale, ClusterId central);

/// Observations mapped into the upscale / multiscale graph's node space.
ObservationStream project_stream_upscale(const ObservationStream& stream, const Partition& p,
                                         const UpscaleGraph& upscale, std::uint64_t seed);
ObservationStream project_stream_multiscale(const ObservationStream& stream, const Partition& p,
                                            const UpscaleGraph& upscale, const MultiscaleGraph& ms,
                                            std::uint64_t seed);

struct MultiscaleOptions
{
    RepresentativeStrategy strategy = RepresentativeStrategy::per_cluster_barycenter;
    ScheduleOptions schedule;
    unsigned workers = 1;
    std::size_t trajectory_stride = 0;
};

struct MultiscaleReport
{
    NodeId barycenter = kNoNode; ///< final estimate, node of the full graph
    std::string barycenter_label;
    NodeId upscale_barycenter = kNoNode;
    std::string upscale_barycenter_label;
    ClusterId central = kNoCluster;
    std::string central_name;
    EstimationReport upscale;
    EstimationReport multiscale;
    std::size_t upscale_nodes = 0;
    std::size_t multiscale_nodes = 0;
    bool central_changed = false;
    bool multiscale_rebuilt = false;
    double wall_seconds = 0.0;
    std::uint64_t seed = 0;
};

/// Two-scale estimation state. Holds a reference to the graph, which must
/// outlive it. Sub-graphs, representatives and boundary distances are
/// computed once in build(); estimate() and update_online() reuse them.
class MultiscalePipeline
{
public:
    /// Throws DataError for an invalid partition before any estimation.
    static MultiscalePipeline build(const MetricGraph& g, Partition p, ObservationStream stream,
                                    const MultiscaleOptions& options, std::uint64_t seed);

    MultiscaleReport estimate();
    /// Appends observations and re-estimates; the multiscale graph is rebuilt
    /// only when the central cluster moves.
    MultiscaleReport update_online(std::span<const NodeId> new_observations);

    void save(std::ostream& out) const;
    /// Throws DataError if the archive does not match `g`.
    static MultiscalePipeline load(std::istream& in, const MetricGraph& g);

    const MetricGraph& graph() const noexcept { return *g_; }
    const Partition& partition() const noexcept { return partition_; }
    const Subgraphs& subgraphs() const noexcept { return subgraphs_; }
    std::span<const NodeId> representatives() const noexcept { return representatives_; }
    const UpscaleGraph& upscale() const noexcept { return upscale_; }
    const MultiscaleGraph* multiscale() const noexcept { return multiscale_ ? &*multiscale_ : nullptr; }
    const ObservationStream& stream() const noexcept { return stream_; }
    std::optional<ClusterId> central() const noexcept { return central_; }
    std::uint64_t seed() const noexcept { return seed_; }
    const MultiscaleOptions& options() const noexcept { return options_; }

private:
    MultiscalePipeline() = default;
    MultiscaleReport run(bool online);

    const MetricGraph* g_ = nullptr;
    Partition partition_;
    Subgraphs subgraphs_;
    std::vector<NodeId> representatives_;
    UpscaleGraph upscale_;
    std::optional<MultiscaleGraph> multiscale_;
    ObservationStream stream_;
    MultiscaleOptions options_;
    std::uint64_t seed_ = 0;
    std::optional<ClusterId> central_;
};

/// Convenience wrapper: build() then estimate().
MultiscaleReport estimate_multiscale(const MetricGraph& g, const ObservationStream& stream, const Partition& p,
                                     const MultiscaleOptions& options, std::uint64_t seed);

} // namespace gbary
