#pragma once

#include "gbary/annealing.hpp"
#include "gbary/metric_graph.hpp"
#include "gbary/multiscale.hpp"
#include "gbary/observation_stream.hpp"
#include "gbary/partition.hpp"

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

namespace gbary {

/// Upper bound on support size x node count for the exact oracle.
inline constexpr double kDefaultOracleBudget = 5e7;

struct OracleResult
{
    NodeId barycenter = kNoNode;     ///< smallest NodeId among the minimizers
    std::vector<NodeId> minimizers;  ///< all nodes within tolerance of the minimum
    std::vector<double> values;      ///< Frechet function per node
};

/// Exact 2-Frechet mean over the nodes: one Dijkstra per support node.
/// Refuses (DataError) when support x nodes exceeds `budget`. The result does
/// not depend on `workers`.
OracleResult exact_barycenter(const MetricGraph& g, const EmpiricalMeasure& m,
                              double budget = kDefaultOracleBudget, unsigned workers = 1);

/// Mean of d(a, b) over all unordered pairs of the list (duplicates included).
/// Throws std::invalid_argument for fewer than two nodes.
double mean_pairwise_distance(const MetricGraph& g, std::span<const NodeId> nodes);

/// Mean distance from x to every other node. Throws for a single-node graph.
double mean_distance_to_all(const MetricGraph& g, NodeId x);

enum class EstimationMode
{
    single,
    multiscale,        ///< per-cluster barycenter representatives
    multiscale_random, ///< random representatives
};

std::string_view to_string(EstimationMode mode) noexcept;
std::optional<EstimationMode> parse_estimation_mode(std::string_view text) noexcept;

/// Returns the stream for one run; the observation list must not depend on the seed.
using StreamFactory = std::function<ObservationStream(std::uint64_t seed)>;

struct BenchConfig
{
    EstimationMode mode = EstimationMode::single;
    ScheduleOptions schedule;
    /// Required for the multiscale modes.
    std::optional<Partition> partition;
    std::size_t runs = 100;
    std::uint64_t seed = 0;
    unsigned workers = 1;
    double oracle_budget = kDefaultOracleBudget;
};

struct RunRecord
{
    std::uint64_t seed = 0;
    NodeId returned = kNoNode;
    bool success = false;
    double wall_seconds = 0.0;
};

struct BenchResult
{
    std::size_t runs = 0;
    std::size_t successes = 0;
    std::vector<NodeId> truth;                 ///< oracle minimizers
    std::vector<RunRecord> records;            ///< in run order
    std::map<NodeId, std::size_t> frequencies; ///< returned node -> count
    double mean_distance = 0.0;                ///< MD over returned nodes

    double ratio() const noexcept { return runs ? static_cast<double>(successes) / static_cast<double>(runs) : 0.0; }
};

/// Seed of run `index` in a bench with base seed `seed`.
std::uint64_t run_seed(std::uint64_t seed, std::size_t index) noexcept;

/// Independent seeded estimations scored against the exact oracle of the
/// stream's empirical measure. A run succeeds when it returns any minimizer.
BenchResult success_ratio(const MetricGraph& g, const StreamFactory& streams, const BenchConfig& config);

/// One estimation in the given mode; returns the barycenter (node of `g`).
NodeId run_estimation(const MetricGraph& g, ObservationStream stream, EstimationMode mode,
                      const ScheduleOptions& schedule, const Partition* partition, std::uint64_t seed);

} // namespace gbary
