#include "gbary/annealing.hpp"

#include "gbary/error.hpp"

#include <chrono>
#include <cmath>
#include <ostream>
#include <stdexcept>

namespace gbary {

std::string_view to_string(BetaKind kind) noexcept
{
    return kind == BetaKind::linear ? "linear" : "log";
}

std::optional<BetaKind> parse_beta_kind(std::string_view text) noexcept
{
    if (text == "log" || text == "logarithmic")
        return BetaKind::logarithmic;
    if (text == "linear")
        return BetaKind::linear;
    return std::nullopt;
}

namespace {

double beta_shape(BetaKind kind, double t) noexcept
{
    return kind == BetaKind::linear ? t : std::log1p(t);
}

double alpha_for_budget(double t_max, double gamma, std::uint64_t s_star) noexcept
{
    const double s = static_cast<double>(s_star);
    if (gamma == 0.0)
        return s / t_max;
    return s * (gamma + 1.0) / (std::pow(1.0 + t_max, gamma + 1.0) - 1.0);
}

} // namespace

double ScheduleConfig::beta(double t) const noexcept
{
    return beta_const * beta_shape(beta_kind, t);
}

double ScheduleConfig::alpha(double t) const noexcept
{
    if (alpha_power == 0.0)
        return alpha_const;
    return alpha_const * std::pow(1.0 + t, alpha_power);
}

double ScheduleConfig::expected_arrivals(double t) const noexcept
{
    if (alpha_power == 0.0)
        return alpha_const * t;
    const double g1 = alpha_power + 1.0;
    return alpha_const * (std::pow(1.0 + t, g1) - 1.0) / g1;
}

double ScheduleConfig::arrival_after(double t, double exp_draw) const noexcept
{
    if (alpha_power == 0.0)
        return t + exp_draw / alpha_const;
    const double g1 = alpha_power + 1.0;
    return std::pow(std::pow(1.0 + t, g1) + exp_draw * g1 / alpha_const, 1.0 / g1) - 1.0;
}

double default_t_max(std::size_t node_count) noexcept
{
    return 0.1 * static_cast<double>(node_count) + 100.0;
}

ScheduleConfig default_schedule(std::size_t node_count, double mean_edge_length, const ScheduleOptions& options)
{
    if (!(options.beta_mult > 0.0) || !(options.tmax_mult > 0.0))
        throw std::invalid_argument("schedule multipliers must be positive");
    if (options.s_star == 0)
        throw std::invalid_argument("observation budget must be positive");
    if (!(options.drift_gain > 0.0))
        throw std::invalid_argument("drift gain must be positive");
    if (options.alpha_power < 0.0)
        throw std::invalid_argument("intensity exponent must be nonnegative");

    const double base_t = default_t_max(node_count);
    const double base_alpha = alpha_for_budget(base_t, options.alpha_power, options.s_star);
    const double final_drift = options.drift_gain / static_cast<double>(options.s_star);
    const double base_beta = final_drift * base_alpha * std::pow(1.0 + base_t, options.alpha_power) /
                             beta_shape(options.beta_kind, base_t);

    ScheduleConfig c;
    c.beta_kind = options.beta_kind;
    c.alpha_power = options.alpha_power;
    c.s_star = options.s_star;
    c.t_max = base_t * options.tmax_mult;
    c.alpha_const = alpha_for_budget(c.t_max, options.alpha_power, options.s_star);
    c.beta_const = base_beta * options.beta_mult;
    c.diffusion_length = options.noise_scale * mean_edge_length;
    return c;
}

ScheduleConfig default_schedule(const MetricGraph& g, const ScheduleOptions& options)
{
    return default_schedule(g.node_count(), g.mean_edge_length(), options);
}

double next_arrival(AnnealingState& state, const ScheduleConfig& config, Rng& rng)
{
    std::exponential_distribution<double> exp1(1.0);
    const double t = config.arrival_after(state.clock, exp1(rng));
    state.last_arrival = state.clock;
    state.clock = t;
    return t;
}

GraphPosition random_walk_distance(const MetricGraph& g, const GraphPosition& pos, double distance, Rng& rng)
{
    if (!(distance > 0.0))
        return pos;

    // Current edge, offset from its lo end, and heading (true = toward hi).
    EdgeId edge;
    double x;
    bool toward_hi;
    if (pos.is_node()) {
        const auto row = g.neighbors(pos.node());
        if (row.empty())
            return pos;
        std::uniform_int_distribution<std::size_t> pick(0, row.size() - 1);
        const auto& h = row[pick(rng)];
        edge = h.edge;
        toward_hi = g.edge(edge).lo == pos.node();
        x = toward_hi ? 0.0 : g.edge(edge).length;
    } else {
        edge = pos.edge();
        x = pos.offset();
        toward_hi = std::uniform_int_distribution<int>(0, 1)(rng) == 1;
    }

    double remaining = distance;
    for (;;) {
        const auto& e = g.edge(edge);
        const double room = toward_hi ? e.length - x : x;
        if (remaining < room)
            return GraphPosition::on_edge(g, edge, toward_hi ? x + remaining : x - remaining);
        remaining -= room;
        const NodeId at = toward_hi ? e.hi : e.lo;
        if (!(remaining > 0.0))
            return GraphPosition::at_node(at);
        const auto row = g.neighbors(at);
        std::uniform_int_distribution<std::size_t> pick(0, row.size() - 1);
        const auto& h = row[pick(rng)];
        edge = h.edge;
        toward_hi = g.edge(edge).lo == at;
        x = toward_hi ? 0.0 : g.edge(edge).length;
    }
}

GraphPosition brownian_step(const MetricGraph& g, const GraphPosition& pos, double sigma, Rng& rng)
{
    if (!(sigma > 0.0))
        return pos;
    std::normal_distribution<double> normal(0.0, sigma);
    return random_walk_distance(g, pos, std::abs(normal(rng)), rng);
}

GraphPosition drift_step(const MetricGraph& g, const GraphPosition& pos, NodeId target, double fraction,
                         DijkstraWorkspace& ws)
{
    if (fraction < 0.0)
        throw std::invalid_argument("drift fraction must be nonnegative");
    if (pos.is_node() && pos.node() == target)
        return pos;
    if (fraction == 0.0) {
        // Still validates reachability.
        distance_from_position(g, pos, target, ws);
        return pos;
    }
    const GeodesicPath path = geodesic_toward(g, pos, target, ws);
    if (fraction >= 1.0)
        return GraphPosition::at_node(target);
    return path.walk(g, fraction * path.length);
}

GraphPosition drift_step(const MetricGraph& g, const GraphPosition& pos, NodeId target, double fraction)
{
    DijkstraWorkspace ws;
    return drift_step(g, pos, target, fraction, ws);
}

EstimationReport estimate_barycenter(const MetricGraph& g, ObservationStream& stream, const ScheduleConfig& config,
                                     std::uint64_t seed, const EstimateOptions& options)
{
    const auto started = std::chrono::steady_clock::now();
    const std::size_t n = g.node_count();
    if (n == 0)
        throw DataError("cannot estimate the barycenter of an empty graph");
    if (stream.empty())
        throw DataError("empty observation stream");
    if (!(config.t_max > 0.0) || !(config.alpha_const > 0.0) || !(config.beta_const >= 0.0))
        throw std::invalid_argument("invalid schedule parameters");
    for (const auto y : stream.observations())
        if (y >= n)
            throw DataError("observation does not belong to the graph");
    if (!g.is_connected())
        throw DataError("graph is not connected");

    Rng rng(seed);
    DijkstraWorkspace ws;
    AnnealingState state;
    if (options.start) {
        if (!is_valid(g, *options.start))
            throw std::invalid_argument("invalid start position");
        state.position = *options.start;
    } else {
        state.position = GraphPosition::at_node(
            static_cast<NodeId>(std::uniform_int_distribution<std::size_t>(0, n - 1)(rng)));
    }

    EstimationReport report;
    for (;;) {
        const double t = next_arrival(state, config, rng);
        if (t > config.t_max)
            break;
        const double sigma = config.diffusion_length * std::sqrt(t - state.last_arrival);
        state.position = brownian_step(g, state.position, sigma, rng);
        const NodeId y = stream.require_next();
        state.position = drift_step(g, state.position, y, config.drift_fraction(t), ws);
        ++state.steps;
        if (options.trajectory_stride > 0 && state.steps % options.trajectory_stride == 0)
            report.trajectory.push_back({t, state.position, nearest_node(g, state.position)});
    }

    report.final_position = state.position;
    report.barycenter = nearest_node(g, state.position);
    report.barycenter_label = g.label(report.barycenter);
    report.final_position_text = format_position(g, state.position);
    report.observations_used = state.steps;
    report.node_count = n;
    report.schedule = config;
    report.seed = seed;
    report.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
    return report;
}

void write_trajectory(std::ostream& out, const MetricGraph& g, const EstimationReport& report)
{
    const auto precision = out.precision(17);
    for (const auto& p : report.trajectory)
        out << p.time << ' ' << format_position(g, p.position) << ' ' << g.label(p.nearest) << '\n';
    out.precision(precision);
}

} // namespace gbary
