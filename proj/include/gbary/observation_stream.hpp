#pragma once

#include "gbary/metric_graph.hpp"
#include "gbary/random.hpp"

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace gbary {

/// How stored observations are consumed once the estimator wants more of them.
enum class ReplayMode
{
    subsample,      ///< uniform random pick, with replacement
    shuffle_replay, ///< shuffled passes, reshuffled at the end of each pass
    resumable,      ///< each observation once, then exhausted until more arrive
};

std::string_view to_string(ReplayMode mode) noexcept;
/// Accepts `subsample`, `replay` / `shuffle-replay`, `resume` / `resumable`.
std::optional<ReplayMode> parse_replay_mode(std::string_view text) noexcept;

/// Sequence of node observations with its own RNG substream.
class ObservationStream
{
public:
    ObservationStream() = default;
    ObservationStream(std::vector<NodeId> observations, ReplayMode mode, std::uint64_t seed);

    /// Next observation, or nullopt once a resumable stream has no unread data.
    std::optional<NodeId> next();
    /// Like next(), but throws StreamExhausted instead of returning nullopt.
    NodeId require_next();

    void append(NodeId observation);

    /// Same observations and mode, fresh cursor and RNG.
    ObservationStream clone(std::uint64_t seed) const;

    std::span<const NodeId> observations() const noexcept { return observations_; }
    std::size_t size() const noexcept { return observations_.size(); }
    bool empty() const noexcept { return observations_.empty(); }
    ReplayMode mode() const noexcept { return mode_; }
    std::uint64_t seed() const noexcept { return seed_; }
    std::size_t cursor() const noexcept { return cursor_; }
    std::size_t passes_started() const noexcept { return passes_; }

    /// Resumable streams only: restore a persisted read position.
    void set_cursor(std::size_t cursor);

private:
    std::vector<NodeId> observations_;
    std::vector<std::size_t> order_;
    ReplayMode mode_ = ReplayMode::shuffle_replay;
    std::uint64_t seed_ = 0;
    Rng rng_;
    std::size_t cursor_ = 0;
    std::size_t passes_ = 0;
};

/// Reads one node label per line (`#` comments, blank lines skipped).
/// Throws DataError on an unknown label (line reported) or an empty file.
ObservationStream load_observations(std::istream& in, const MetricGraph& g, ReplayMode mode,
                                    std::uint64_t seed, const std::string& source = "<input>");
ObservationStream load_observations_file(const std::filesystem::path& path, const MetricGraph& g,
                                         ReplayMode mode, std::uint64_t seed);

/// Counts per node over the stored observations (weight = count).
EmpiricalMeasure empirical_measure(const ObservationStream& stream, std::size_t node_count);
EmpiricalMeasure empirical_measure(std::span<const NodeId> observations, std::size_t node_count);

} // namespace gbary
