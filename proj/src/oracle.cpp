#include "gbary/oracle.hpp"

#include "gbary/error.hpp"
#include "gbary/parallel.hpp"
#include "gbary/random.hpp"
#include "gbary/shortest_path.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <stdexcept>
#include <unordered_map>

namespace gbary {

OracleResult exact_barycenter(const MetricGraph& g, const EmpiricalMeasure& m, double budget, unsigned workers)
{
    const std::size_t n = g.node_count();
    if (m.node_count() != n)
        throw std::invalid_argument("measure does not match the graph");
    if (!(m.total() > 0.0))
        throw DataError("empty measure");
    const auto support = m.support();
    const double work = static_cast<double>(support.size()) * static_cast<double>(n);
    if (work > budget)
        throw DataError("exact oracle refused: " + std::to_string(support.size()) + " support nodes x " +
                        std::to_string(n) + " nodes exceeds the budget");

    // Fixed-size blocks summed in order keep the floating-point result
    // independent of the worker count.
    constexpr std::size_t block = 64;
    const std::size_t blocks = (support.size() + block - 1) / block;
    std::vector<std::vector<double>> partial(blocks);
    parallel_for(blocks, resolve_workers(workers, blocks), [&](std::size_t b, unsigned) {
        auto& acc = partial[b];
        acc.assign(n, 0.0);
        DijkstraWorkspace ws;
        const std::size_t end = std::min(support.size(), (b + 1) * block);
        for (std::size_t i = b * block; i < end; ++i) {
            const NodeId y = support[i];
            const double w = m.weight(y) / m.total();
            run_dijkstra(g, y, ws, [](NodeId) { return true; }, [](NodeId) { return false; });
            for (NodeId x = 0; x < n; ++x) {
                const double d = ws.distance(x);
                if (d == kUnreachable)
                    throw DataError("graph is not connected");
                acc[x] += d * d * w;
            }
        }
    });

    OracleResult result;
    result.values.assign(n, 0.0);
    for (auto& acc : partial) {
        for (NodeId x = 0; x < n; ++x)
            result.values[x] += acc[x];
        std::vector<double>().swap(acc);
    }
    const double best = *std::min_element(result.values.begin(), result.values.end());
    const double tol = 1e-9 * std::max(1.0, std::abs(best));
    for (NodeId x = 0; x < n; ++x)
        if (result.values[x] <= best + tol)
            result.minimizers.push_back(x);
    result.barycenter = result.minimizers.front();
    return result;
}

double mean_pairwise_distance(const MetricGraph& g, std::span<const NodeId> nodes)
{
    if (nodes.size() < 2)
        throw std::invalid_argument("mean pairwise distance needs at least two nodes");
    std::unordered_map<NodeId, std::vector<double>> rows;
    double sum = 0.0;
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        auto it = rows.find(nodes[i]);
        if (it == rows.end())
            it = rows.emplace(nodes[i], shortest_distances(g, nodes[i])).first;
        for (std::size_t j = i + 1; j < nodes.size(); ++j) {
            const double d = it->second[nodes[j]];
            if (d == kUnreachable)
                throw DataError("graph is not connected");
            sum += d;
        }
    }
    const double pairs = static_cast<double>(nodes.size()) * static_cast<double>(nodes.size() - 1) / 2.0;
    return sum / pairs;
}

double mean_distance_to_all(const MetricGraph& g, NodeId x)
{
    if (g.node_count() < 2)
        throw std::invalid_argument("mean distance to all nodes needs at least two nodes");
    const auto dist = shortest_distances(g, x);
    double sum = 0.0;
    for (NodeId y = 0; y < dist.size(); ++y) {
        if (dist[y] == kUnreachable)
            throw DataError("graph is not connected");
        sum += dist[y];
    }
    return sum / static_cast<double>(g.node_count() - 1);
}

std::string_view to_string(EstimationMode mode) noexcept
{
    switch (mode) {
    case EstimationMode::single:
        return "single";
    case EstimationMode::multiscale:
        return "multiscale";
    case EstimationMode::multiscale_random:
        return "multiscale-random";
    }
    return "single";
}

std::optional<EstimationMode> parse_estimation_mode(std::string_view text) noexcept
{
    if (text == "single")
        return EstimationMode::single;
    if (text == "multiscale")
        return EstimationMode::multiscale;
    if (text == "multiscale-random")
        return EstimationMode::multiscale_random;
    return std::nullopt;
}

std::uint64_t run_seed(std::uint64_t seed, std::size_t index) noexcept
{
    return mix_seed(seed, 1000 + index);
}

NodeId run_estimation(const MetricGraph& g, ObservationStream stream, EstimationMode mode,
                      const ScheduleOptions& schedule, const Partition* partition, std::uint64_t seed)
{
    if (mode == EstimationMode::single) {
        return estimate_barycenter(g, stream, default_schedule(g, schedule), mix_seed(seed, seed_tag::annealing))
            .barycenter;
    }
    if (!partition)
        throw std::invalid_argument("multiscale estimation needs a partition");
    MultiscaleOptions options;
    options.schedule = schedule;
    options.strategy = mode == EstimationMode::multiscale ? RepresentativeStrategy::per_cluster_barycenter
                                                          : RepresentativeStrategy::random;
    return estimate_multiscale(g, stream, *partition, options, seed).barycenter;
}

BenchResult success_ratio(const MetricGraph& g, const StreamFactory& streams, const BenchConfig& config)
{
    if (config.runs == 0)
        throw std::invalid_argument("bench needs at least one run");
    if (config.mode != EstimationMode::single && !config.partition)
        throw std::invalid_argument("multiscale bench needs a partition");

    BenchResult result;
    result.runs = config.runs;
    result.records.resize(config.runs);

    const ObservationStream reference = streams(run_seed(config.seed, 0));
    const auto oracle =
        exact_barycenter(g, empirical_measure(reference, g.node_count()), config.oracle_budget, config.workers);
    result.truth = oracle.minimizers;

    const Partition* partition = config.partition ? &*config.partition : nullptr;
    const unsigned workers = resolve_workers(config.workers, config.runs);
    parallel_for(config.runs, workers, [&](std::size_t i, unsigned) {
        const auto started = std::chrono::steady_clock::now();
        const std::uint64_t seed = run_seed(config.seed, i);
        ObservationStream stream = streams(mix_seed(seed, seed_tag::stream));
        if (!std::equal(stream.observations().begin(), stream.observations().end(),
                        reference.observations().begin(), reference.observations().end()))
            throw std::invalid_argument("stream factory must return the same observations for every run");
        auto& rec = result.records[i];
        rec.seed = seed;
        rec.returned = run_estimation(g, std::move(stream), config.mode, config.schedule, partition, seed);
        rec.success = std::binary_search(result.truth.begin(), result.truth.end(), rec.returned);
        rec.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
    });

    std::vector<NodeId> returned;
    returned.reserve(config.runs);
    for (const auto& rec : result.records) {
        result.successes += rec.success ? 1 : 0;
        ++result.frequencies[rec.returned];
        returned.push_back(rec.returned);
    }
    result.mean_distance = returned.size() >= 2 ? mean_pairwise_distance(g, returned) : 0.0;
    return result;
}

} // namespace gbary
