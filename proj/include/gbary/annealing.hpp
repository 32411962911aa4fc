#pragma once

#include "gbary/metric_graph.hpp"
#include "gbary/observation_stream.hpp"
#include "gbary/position.hpp"
#include "gbary/random.hpp"
#include "gbary/shortest_path.hpp"

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace gbary {

enum class BetaKind
{
    logarithmic, ///< beta_t = beta * log(1 + t)
    linear,      ///< beta_t = beta * t
};

std::string_view to_string(BetaKind kind) noexcept;
std::optional<BetaKind> parse_beta_kind(std::string_view text) noexcept;

/// Inverse temperature and observation intensity of one annealing run.
///
/// Arrivals follow a Poisson clock with intensity alpha_t = alpha * (1+t)^gamma
/// (gamma = 0 gives a constant rate). Each arrival applies a Brownian move of
/// standard deviation diffusion_length * sqrt(dt) followed by a drift of
/// fraction beta_t / alpha_t along the geodesic to the observation.
struct ScheduleConfig
{
    BetaKind beta_kind = BetaKind::logarithmic;
    double beta_const = 1.0;
    double alpha_const = 1.0;
    double alpha_power = 0.0;
    double t_max = 100.0;
    std::uint64_t s_star = 1000;
    double diffusion_length = 1.0;

    double beta(double t) const noexcept;
    double alpha(double t) const noexcept;
    double drift_fraction(double t) const noexcept { return beta(t) / alpha(t); }
    /// Integrated intensity over [0, t]: expected number of arrivals.
    double expected_arrivals(double t) const noexcept;
    /// Arrival time following `t` for an Exp(1) increment of the integrated intensity.
    double arrival_after(double t, double exp_draw) const noexcept;
};

/// Knobs from which default_schedule() derives a ScheduleConfig.
struct ScheduleOptions
{
    BetaKind beta_kind = BetaKind::logarithmic;
    double beta_mult = 1.0;
    double tmax_mult = 1.0;
    std::uint64_t s_star = 1000;
    double alpha_power = 4.0;
    /// beta_t / alpha_t at the default stopping time, times s_star.
    double drift_gain = 6.0;
    /// Brownian length unit as a fraction of the mean edge length.
    double noise_scale = 0.1;
};

/// Stopping time rule for a graph with `node_count` nodes: 0.1 * #N + 100.
double default_t_max(std::size_t node_count) noexcept;

/// Calibrates a schedule for `g`. alpha is set so that s_star arrivals are
/// expected over [0, t_max]; beta is fixed at the default stopping time, so
/// the t_max multiplier changes alpha but not beta.
ScheduleConfig default_schedule(const MetricGraph& g, const ScheduleOptions& options = {});
ScheduleConfig default_schedule(std::size_t node_count, double mean_edge_length,
                                const ScheduleOptions& options = {});

/// State of the process X_t.
struct AnnealingState
{
    GraphPosition position;
    double clock = 0.0;
    double last_arrival = 0.0;
    std::size_t steps = 0;
};

/// Advances the state to the next Poisson arrival and returns its time.
double next_arrival(AnnealingState& state, const ScheduleConfig& config, Rng& rng);

/// Walks exactly `distance` along the continuous graph: a uniform direction
/// at the start, and a fresh uniform incident edge at every node crossed.
GraphPosition random_walk_distance(const MetricGraph& g, const GraphPosition& pos, double distance, Rng& rng);

/// Draws eps ~ Normal(0, sigma^2) and walks |eps| (see random_walk_distance).
GraphPosition brownian_step(const MetricGraph& g, const GraphPosition& pos, double sigma, Rng& rng);

/// Moves min(fraction, 1) of the geodesic distance from `pos` toward `target`.
GraphPosition drift_step(const MetricGraph& g, const GraphPosition& pos, NodeId target, double fraction,
                         DijkstraWorkspace& ws);
GraphPosition drift_step(const MetricGraph& g, const GraphPosition& pos, NodeId target, double fraction);

struct TrajectoryPoint
{
    double time = 0.0;
    GraphPosition position;
    NodeId nearest = kNoNode;
};

struct EstimationReport
{
    NodeId barycenter = kNoNode;
    std::string barycenter_label;
    GraphPosition final_position;
    std::string final_position_text;
    std::size_t observations_used = 0;
    std::size_t node_count = 0;
    double wall_seconds = 0.0;
    ScheduleConfig schedule;
    std::uint64_t seed = 0;
    std::vector<TrajectoryPoint> trajectory;
};

struct EstimateOptions
{
    /// Start position; a uniformly random node when unset.
    std::optional<GraphPosition> start;
    /// Record every n-th drift step in the trajectory (0 = none).
    std::size_t trajectory_stride = 0;
};

/// Runs the homogenized annealing process until the clock passes t_max and
/// returns the node nearest to the final position. Consumes `stream`.
/// Throws DataError for a disconnected graph or an empty stream, and
/// StreamExhausted when a resumable stream runs dry.
EstimationReport estimate_barycenter(const MetricGraph& g, ObservationStream& stream, const ScheduleConfig& config,
                                     std::uint64_t seed, const EstimateOptions& options = {});

/// Writes `<t> <position> <nearest-node>` per recorded drift step.
void write_trajectory(std::ostream& out, const MetricGraph& g, const EstimationReport& report);

} // namespace gbary
