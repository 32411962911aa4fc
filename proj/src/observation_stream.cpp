#include "gbary/observation_stream.hpp"

#include "gbary/error.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <numeric>
#include <stdexcept>

namespace gbary {

std::string_view to_string(ReplayMode mode) noexcept
{
    switch (mode) {
    case ReplayMode::subsample:
        return "subsample";
    case ReplayMode::shuffle_replay:
        return "replay";
    case ReplayMode::resumable:
        return "resume";
    }
    return "replay";
}

std::optional<ReplayMode> parse_replay_mode(std::string_view text) noexcept
{
    if (text == "subsample")
        return ReplayMode::subsample;
    if (text == "replay" || text == "shuffle-replay")
        return ReplayMode::shuffle_replay;
    if (text == "resume" || text == "resumable")
        return ReplayMode::resumable;
    return std::nullopt;
}

ObservationStream::ObservationStream(std::vector<NodeId> observations, ReplayMode mode, std::uint64_t seed)
    : observations_(std::move(observations)), mode_(mode), seed_(seed), rng_(seed)
{
}

std::optional<NodeId> ObservationStream::next()
{
    if (observations_.empty())
        return std::nullopt;
    switch (mode_) {
    case ReplayMode::subsample: {
        std::uniform_int_distribution<std::size_t> pick(0, observations_.size() - 1);
        ++cursor_;
        return observations_[pick(rng_)];
    }
    case ReplayMode::shuffle_replay: {
        if (cursor_ == 0 || cursor_ >= order_.size()) {
            order_.resize(observations_.size());
            std::iota(order_.begin(), order_.end(), std::size_t{0});
            std::shuffle(order_.begin(), order_.end(), rng_);
            cursor_ = 0;
            ++passes_;
        }
        return observations_[order_[cursor_++]];
    }
    case ReplayMode::resumable:
        if (cursor_ >= observations_.size())
            return std::nullopt;
        return observations_[cursor_++];
    }
    return std::nullopt;
}

NodeId ObservationStream::require_next()
{
    if (auto y = next())
        return *y;
    throw StreamExhausted();
}

void ObservationStream::append(NodeId observation)
{
    observations_.push_back(observation);
}

ObservationStream ObservationStream::clone(std::uint64_t seed) const
{
    return ObservationStream(observations_, mode_, seed);
}

void ObservationStream::set_cursor(std::size_t cursor)
{
    if (mode_ != ReplayMode::resumable)
        throw std::logic_error("set_cursor applies to resumable streams only");
    cursor_ = std::min(cursor, observations_.size());
}

ObservationStream load_observations(std::istream& in, const MetricGraph& g, ReplayMode mode,
                                    std::uint64_t seed, const std::string& source)
{
    std::vector<NodeId> obs;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos || line[first] == '#')
            continue;
        const auto last = line.find_last_not_of(" \t\r");
        const std::string label = line.substr(first, last - first + 1);
        const auto id = g.find(label);
        if (!id)
            throw DataError(source, line_no, "unknown node label '" + label + "'");
        obs.push_back(*id);
    }
    if (obs.empty())
        throw DataError(source, 0, "empty observation stream");
    return ObservationStream(std::move(obs), mode, seed);
}

ObservationStream load_observations_file(const std::filesystem::path& path, const MetricGraph& g,
                                         ReplayMode mode, std::uint64_t seed)
{
    std::ifstream in(path);
    if (!in)
        throw DataError(path.string(), 0, "cannot open observation file");
    return load_observations(in, g, mode, seed, path.string());
}

EmpiricalMeasure empirical_measure(std::span<const NodeId> observations, std::size_t node_count)
{
    EmpiricalMeasure m(node_count);
    for (const auto y : observations)
        m.add(y);
    return m;
}

EmpiricalMeasure empirical_measure(const ObservationStream& stream, std::size_t node_count)
{
    return empirical_measure(stream.observations(), node_count);
}

} // namespace gbary
