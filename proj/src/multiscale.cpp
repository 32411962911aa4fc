#include "gbary/multiscale.hpp"

#include "gbary/error.hpp"
#include "gbary/parallel.hpp"
#include "gbary/projection.hpp"
#include "gbary/random.hpp"

#include <chrono>
#include <map>
#include <stdexcept>

namespace gbary {

std::string_view to_string(RepresentativeStrategy s) noexcept
{
    return s == RepresentativeStrategy::random ? "random" : "barycenter";
}

std::optional<RepresentativeStrategy> parse_strategy(std::string_view text) noexcept
{
    if (text == "random")
        return RepresentativeStrategy::random;
    if (text == "barycenter" || text == "per-cluster-barycenter")
        return RepresentativeStrategy::per_cluster_barycenter;
    return std::nullopt;
}

std::vector<NodeId> choose_representatives(const MetricGraph& g, const Partition& p, const Subgraphs& s,
                                           RepresentativeStrategy strategy, const ObservationStream& stream,
                                           const ScheduleOptions& schedule, std::uint64_t seed, unsigned workers)
{
    const std::size_t k = p.cluster_count();
    std::vector<NodeId> reps(k, kNoNode);

    if (strategy == RepresentativeStrategy::random) {
        Rng rng(mix_seed(seed, seed_tag::representatives));
        for (ClusterId c = 0; c < k; ++c) {
            const auto members = p.members(c);
            reps[c] = members[std::uniform_int_distribution<std::size_t>(0, members.size() - 1)(rng)];
        }
        return reps;
    }

    std::vector<std::vector<NodeId>> local_obs(k);
    for (const auto y : stream.observations())
        local_obs[p.cluster_of(y)].push_back(y);

    const std::uint64_t cluster_seed = mix_seed(seed, seed_tag::cluster_estimation);
    parallel_for(k, resolve_workers(workers, k), [&](std::size_t c, unsigned) {
        const auto id = static_cast<ClusterId>(c);
        const auto members = p.members(id);
        if (members.size() == 1) {
            reps[c] = members.front();
            return;
        }
        const MetricGraph sub = cluster_graph(g, p, s, id);
        std::vector<NodeId> obs;
        if (local_obs[c].empty()) {
            warn("cluster " + p.name(id) + " has no observations; using the uniform measure on its nodes");
            obs.resize(sub.node_count());
            for (NodeId n = 0; n < obs.size(); ++n)
                obs[n] = n;
        } else {
            obs.reserve(local_obs[c].size());
            for (const auto y : local_obs[c])
                obs.push_back(sub.require(g.label(y)));
        }
        const std::uint64_t run_seed = mix_seed(cluster_seed, c);
        ObservationStream sub_stream(std::move(obs), ReplayMode::shuffle_replay, mix_seed(run_seed, seed_tag::stream));
        const auto report = estimate_barycenter(sub, sub_stream, default_schedule(sub, schedule), run_seed);
        reps[c] = g.require(report.barycenter_label);
    });
    return reps;
}

void fill_boundary_distances(const MetricGraph& g, const Partition& p, std::span<const NodeId> representatives,
                             ClusterId c, std::vector<BoundaryRecord>& records, DijkstraWorkspace& ws)
{
    const NodeId rep = representatives[c];
    if (p.cluster_of(rep) != c)
        throw std::logic_error("representative lies outside its cluster");
    if (records.empty())
        return;
    run_dijkstra(
        g, rep, ws, [&](NodeId v) { return p.cluster_of(v) == c; }, [](NodeId) { return false; });
    for (auto& r : records) {
        const double d = ws.distance(r.inner);
        if (d == kUnreachable)
            throw std::logic_error("boundary node " + g.label(r.inner) + " unreachable inside cluster " + p.name(c));
        r.rep_dist = d;
    }
}

void fill_boundary_distances(const MetricGraph& g, const Partition& p, std::span<const NodeId> representatives,
                             Subgraphs& s, unsigned workers)
{
    const std::size_t k = p.cluster_count();
    workers = resolve_workers(workers, k);
    std::vector<DijkstraWorkspace> ws(workers);
    parallel_for(k, workers, [&](std::size_t c, unsigned w) {
        fill_boundary_distances(g, p, representatives, static_cast<ClusterId>(c), s.boundaries[c], ws[w]);
    });
}

std::vector<UpscaleEdge> build_upscale_edges(const Subgraphs& s)
{
    std::map<std::pair<ClusterId, ClusterId>, double> best;
    for (ClusterId i = 0; i < s.boundaries.size(); ++i) {
        for (const auto& r : s.boundaries[i]) {
            if (!(i < r.outer_cluster))
                continue;
            const auto& other = s.boundaries.at(r.outer_cluster);
            if (r.mirror >= other.size() || other[r.mirror].inner != r.outer || other[r.mirror].outer != r.inner)
                throw std::logic_error("boundary record without mirror");
            const auto& m = other[r.mirror];
            if (!r.rep_dist || !m.rep_dist)
                throw std::logic_error("boundary distances not computed");
            const double tmp = r.weight + *r.rep_dist + *m.rep_dist;
            const auto [it, inserted] = best.try_emplace({i, r.outer_cluster}, tmp);
            if (!inserted && it->second > tmp)
                it->second = tmp;
        }
    }
    std::vector<UpscaleEdge> edges;
    edges.reserve(best.size());
    for (const auto& [key, len] : best)
        edges.push_back({key.first, key.second, len});
    return edges;
}

UpscaleGraph upscale_graph_from_edges(const MetricGraph& g, const Partition& p,
                                      std::span<const NodeId> representatives, std::vector<UpscaleEdge> edges)
{
    const std::size_t k = p.cluster_count();
    if (representatives.size() != k)
        throw std::invalid_argument("one representative per cluster required");
    GraphBuilder builder;
    for (ClusterId c = 0; c < k; ++c)
        builder.add_node(g.label(representatives[c]));
    for (const auto& e : edges)
        builder.add_edge(g.label(representatives[e.a]), g.label(representatives[e.b]), e.length);

    UpscaleGraph up;
    up.graph = builder.build();
    up.representatives.assign(representatives.begin(), representatives.end());
    up.edges = std::move(edges);
    up.node_of_cluster.resize(k);
    up.rep_cluster.resize(k);
    for (ClusterId c = 0; c < k; ++c) {
        const NodeId local = up.graph.require(g.label(representatives[c]));
        up.node_of_cluster[c] = local;
        up.rep_cluster[local] = c;
    }
    if (!up.graph.is_connected())
        throw DataError("upscale graph is disconnected; the partition is not valid for this graph");
    return up;
}

UpscaleGraph build_upscale_graph(const MetricGraph& g, const Partition& p, const Subgraphs& s,
                                 std::span<const NodeId> representatives)
{
    return upscale_graph_from_edges(g, p, representatives, build_upscale_edges(s));
}

MultiscaleGraph build_multiscale_graph(const MetricGraph& g, const Partition& p, const Subgraphs& s,
                                       const UpscaleGraph& upscale, ClusterId central)
{
    if (central >= p.cluster_count())
        throw std::invalid_argument("unknown central cluster");
    const auto& reps = upscale.representatives;

    GraphBuilder builder;
    for (const auto v : p.members(central))
        builder.add_node(g.label(v));
    for (ClusterId c = 0; c < p.cluster_count(); ++c)
        if (c != central)
            builder.add_node(g.label(reps[c]));

    for (const auto e : s.internal_edges[central]) {
        const auto& edge = g.edge(e);
        builder.add_edge(g.label(edge.lo), g.label(edge.hi), edge.length);
    }
    for (const auto& e : upscale.edges)
        if (e.a != central && e.b != central)
            builder.add_edge(g.label(reps[e.a]), g.label(reps[e.b]), e.length);

    std::map<std::pair<NodeId, ClusterId>, double> border;
    for (const auto& r : s.boundaries[central]) {
        const auto& m = s.boundaries.at(r.outer_cluster).at(r.mirror);
        if (!m.rep_dist)
            throw std::logic_error("boundary distances not computed");
        const double len = r.weight + *m.rep_dist;
        const auto [it, inserted] = border.try_emplace({r.inner, r.outer_cluster}, len);
        if (!inserted && it->second > len)
            it->second = len;
    }
    for (const auto& [key, len] : border)
        builder.add_edge(g.label(key.first), g.label(reps[key.second]), len);

    MultiscaleGraph ms;
    ms.graph = builder.build();
    ms.central = central;
    ms.original.resize(ms.graph.node_count());
    ms.local.assign(g.node_count(), kNoNode);
    for (NodeId n = 0; n < ms.graph.node_count(); ++n) {
        const NodeId orig = g.require(ms.graph.label(n));
        ms.original[n] = orig;
        ms.local[orig] = n;
    }
    return ms;
}

ObservationStream project_stream_upscale(const ObservationStream& stream, const Partition& p,
                                         const UpscaleGraph& upscale, std::uint64_t seed)
{
    std::vector<NodeId> obs;
    obs.reserve(stream.size());
    for (const auto y : stream.observations()) {
        project_upscale(y, p, upscale.representatives);
        obs.push_back(upscale.node_of_cluster[p.cluster_of(y)]);
    }
    ObservationStream out(std::move(obs), stream.mode(), seed);
    if (stream.mode() == ReplayMode::resumable)
        out.set_cursor(stream.cursor());
    return out;
}

ObservationStream project_stream_multiscale(const ObservationStream& stream, const Partition& p,
                                            const UpscaleGraph& upscale, const MultiscaleGraph& ms,
                                            std::uint64_t seed)
{
    std::vector<NodeId> obs;
    obs.reserve(stream.size());
    for (const auto y : stream.observations())
        obs.push_back(ms.local[project_multiscale(y, p, ms.central, upscale.representatives)]);
    ObservationStream out(std::move(obs), stream.mode(), seed);
    if (stream.mode() == ReplayMode::resumable)
        out.set_cursor(stream.cursor());
    return out;
}

MultiscalePipeline MultiscalePipeline::build(const MetricGraph& g, Partition p, ObservationStream stream,
                                             const MultiscaleOptions& options, std::uint64_t seed)
{
    if (p.node_count() != g.node_count())
        throw DataError("partition does not cover the graph");
    if (stream.empty())
        throw DataError("empty observation stream");
    if (!g.is_connected())
        throw DataError("graph is not connected");
    const auto validity = validate_partition(g, p, options.workers);
    if (!validity.valid) {
        std::string msg = "invalid partition:";
        for (const auto c : validity.empty_clusters)
            msg += " cluster " + p.name(c) + " is empty;";
        for (const auto c : validity.disconnected_clusters)
            msg += " cluster " + p.name(c) + " is disconnected;";
        throw DataError(msg);
    }

    MultiscalePipeline pl;
    pl.g_ = &g;
    pl.partition_ = std::move(p);
    pl.stream_ = std::move(stream);
    pl.options_ = options;
    pl.seed_ = seed;

    std::vector<std::size_t> mass(pl.partition_.cluster_count(), 0);
    for (const auto y : pl.stream_.observations())
        ++mass.at(pl.partition_.cluster_of(y));
    for (ClusterId c = 0; c < mass.size(); ++c)
        if (mass[c] == 0)
            warn("cluster " + pl.partition_.name(c) + " carries no observed mass");

    pl.subgraphs_ = extract_subgraphs(g, pl.partition_);
    pl.representatives_ = choose_representatives(g, pl.partition_, pl.subgraphs_, options.strategy, pl.stream_,
                                                 options.schedule, seed, options.workers);
    fill_boundary_distances(g, pl.partition_, pl.representatives_, pl.subgraphs_, options.workers);
    pl.upscale_ = build_upscale_graph(g, pl.partition_, pl.subgraphs_, pl.representatives_);
    return pl;
}

MultiscaleReport MultiscalePipeline::run(bool online)
{
    const auto started = std::chrono::steady_clock::now();
    const MetricGraph& g = *g_;
    const std::uint64_t stream_seed = mix_seed(seed_, seed_tag::stream);
    EstimateOptions est;
    est.trajectory_stride = options_.trajectory_stride;

    MultiscaleReport report;
    report.seed = seed_;
    auto up_stream = project_stream_upscale(stream_, partition_, upscale_, stream_seed);
    report.upscale = estimate_barycenter(upscale_.graph, up_stream, default_schedule(upscale_.graph, options_.schedule),
                                         mix_seed(seed_, seed_tag::upscale_stage), est);
    const ClusterId central = upscale_.rep_cluster[report.upscale.barycenter];
    report.upscale_barycenter = upscale_.representatives[central];
    report.upscale_barycenter_label = g.label(report.upscale_barycenter);
    report.central = central;
    report.central_name = partition_.name(central);
    report.central_changed = online && central_ != central;

    if (!multiscale_ || multiscale_->central != central) {
        multiscale_ = build_multiscale_graph(g, partition_, subgraphs_, upscale_, central);
        report.multiscale_rebuilt = true;
    }
    central_ = central;

    auto ms_stream = project_stream_multiscale(stream_, partition_, upscale_, *multiscale_, mix_seed(stream_seed, 1));
    report.multiscale = estimate_barycenter(multiscale_->graph, ms_stream,
                                            default_schedule(multiscale_->graph, options_.schedule),
                                            mix_seed(seed_, seed_tag::multiscale_stage), est);
    report.barycenter = multiscale_->original[report.multiscale.barycenter];
    report.barycenter_label = g.label(report.barycenter);
    report.upscale_nodes = upscale_.graph.node_count();
    report.multiscale_nodes = multiscale_->graph.node_count();
    report.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
    return report;
}

MultiscaleReport MultiscalePipeline::estimate()
{
    return run(false);
}

MultiscaleReport MultiscalePipeline::update_online(std::span<const NodeId> new_observations)
{
    for (const auto y : new_observations) {
        if (y >= g_->node_count())
            throw DataError("observation does not belong to the graph");
        stream_.append(y);
    }
    return run(true);
}

MultiscaleReport estimate_multiscale(const MetricGraph& g, const ObservationStream& stream, const Partition& p,
                                     const MultiscaleOptions& options, std::uint64_t seed)
{
    auto pipeline = MultiscalePipeline::build(g, p, stream, options, seed);
    return pipeline.estimate();
}

} // namespace gbary
