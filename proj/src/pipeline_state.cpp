// Archive of a MultiscalePipeline: everything needed to resume online
// updates without recomputing sub-graphs or boundary distances.

#include "gbary/error.hpp"
#include "gbary/multiscale.hpp"

#include <json.hpp>

#include <cstdio>
#include <istream>
#include <ostream>

namespace gbary {

namespace {

constexpr const char* kFormat = "gbary-pipeline";
constexpr int kVersion = 1;

using nlohmann::json;

std::string hex(std::uint64_t v)
{
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
    return buf;
}

json schedule_to_json(const ScheduleOptions& s)
{
    return {{"beta", std::string(to_string(s.beta_kind))},
            {"beta_mult", s.beta_mult},
            {"tmax_mult", s.tmax_mult},
            {"s_star", s.s_star},
            {"alpha_power", s.alpha_power},
            {"drift_gain", s.drift_gain},
            {"noise_scale", s.noise_scale}};
}

ScheduleOptions schedule_from_json(const json& j)
{
    ScheduleOptions s;
    const auto kind = parse_beta_kind(j.at("beta").get<std::string>());
    if (!kind)
        throw DataError("pipeline archive: unknown beta kind");
    s.beta_kind = *kind;
    s.beta_mult = j.at("beta_mult").get<double>();
    s.tmax_mult = j.at("tmax_mult").get<double>();
    s.s_star = j.at("s_star").get<std::uint64_t>();
    s.alpha_power = j.at("alpha_power").get<double>();
    s.drift_gain = j.at("drift_gain").get<double>();
    s.noise_scale = j.at("noise_scale").get<double>();
    return s;
}

} // namespace

void MultiscalePipeline::save(std::ostream& out) const
{
    const MetricGraph& g = *g_;
    json j;
    j["format"] = kFormat;
    j["version"] = kVersion;
    j["graph_hash"] = hex(g.content_hash());
    j["partition_hash"] = hex(partition_.content_hash());
    j["node_count"] = g.node_count();
    j["seed"] = seed_;
    j["strategy"] = std::string(to_string(options_.strategy));
    j["schedule"] = schedule_to_json(options_.schedule);

    j["partition"]["names"] = std::vector<std::string>(partition_.cluster_count());
    for (ClusterId c = 0; c < partition_.cluster_count(); ++c)
        j["partition"]["names"][c] = partition_.name(c);
    j["partition"]["assignment"] = std::vector<ClusterId>(partition_.assignment().begin(), partition_.assignment().end());

    json reps = json::array();
    for (const auto r : representatives_)
        reps.push_back(g.label(r));
    j["representatives"] = std::move(reps);

    json boundaries = json::array();
    for (const auto& list : subgraphs_.boundaries) {
        json records = json::array();
        for (const auto& r : list)
            records.push_back({g.label(r.inner), g.label(r.outer), r.weight, r.outer_cluster,
                               r.rep_dist ? json(*r.rep_dist) : json(nullptr), r.mirror});
        boundaries.push_back(std::move(records));
    }
    j["boundaries"] = std::move(boundaries);

    json edges = json::array();
    for (const auto& e : upscale_.edges)
        edges.push_back({e.a, e.b, e.length});
    j["upscale_edges"] = std::move(edges);
    j["central"] = central_ ? json(*central_) : json(nullptr);

    json obs = json::array();
    for (const auto y : stream_.observations())
        obs.push_back(g.label(y));
    j["stream"] = {{"mode", std::string(to_string(stream_.mode()))},
                   {"seed", stream_.seed()},
                   {"cursor", stream_.cursor()},
                   {"observations", std::move(obs)}};
    out << j.dump() << '\n';
}

MultiscalePipeline MultiscalePipeline::load(std::istream& in, const MetricGraph& g)
{
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw DataError(std::string("pipeline archive is not valid JSON: ") + e.what());
    }
    try {
        if (j.at("format").get<std::string>() != kFormat)
            throw DataError("not a pipeline archive");
        if (j.at("version").get<int>() != kVersion)
            throw DataError("unsupported pipeline archive version " + std::to_string(j.at("version").get<int>()));
        if (j.at("graph_hash").get<std::string>() != hex(g.content_hash()))
            throw DataError("stale pipeline archive: graph hash mismatch");

        MultiscalePipeline pl;
        pl.g_ = &g;
        pl.seed_ = j.at("seed").get<std::uint64_t>();
        const auto strategy = parse_strategy(j.at("strategy").get<std::string>());
        if (!strategy)
            throw DataError("pipeline archive: unknown strategy");
        pl.options_.strategy = *strategy;
        pl.options_.schedule = schedule_from_json(j.at("schedule"));

        auto names = j.at("partition").at("names").get<std::vector<std::string>>();
        auto assignment = j.at("partition").at("assignment").get<std::vector<ClusterId>>();
        if (assignment.size() != g.node_count())
            throw DataError("stale pipeline archive: partition size mismatch");
        const std::size_t k = names.size();
        pl.partition_ = Partition(std::move(assignment), k, std::move(names));
        if (j.at("partition_hash").get<std::string>() != hex(pl.partition_.content_hash()))
            throw DataError("stale pipeline archive: partition hash mismatch");

        for (const auto& label : j.at("representatives"))
            pl.representatives_.push_back(g.require(label.get<std::string>()));
        if (pl.representatives_.size() != k)
            throw DataError("pipeline archive: representative count mismatch");

        const auto& boundaries = j.at("boundaries");
        if (boundaries.size() != k)
            throw DataError("pipeline archive: boundary list count mismatch");
        pl.subgraphs_.boundaries.resize(k);
        for (std::size_t c = 0; c < k; ++c) {
            for (const auto& r : boundaries[c]) {
                BoundaryRecord rec;
                rec.inner = g.require(r.at(0).get<std::string>());
                rec.outer = g.require(r.at(1).get<std::string>());
                rec.weight = r.at(2).get<double>();
                rec.outer_cluster = r.at(3).get<ClusterId>();
                if (!r.at(4).is_null())
                    rec.rep_dist = r.at(4).get<double>();
                rec.mirror = r.at(5).get<std::size_t>();
                pl.subgraphs_.boundaries[c].push_back(rec);
            }
        }
        // Internal edge lists follow from the partition in one pass.
        pl.subgraphs_.internal_edges.resize(k);
        for (EdgeId e = 0; e < g.edge_count(); ++e) {
            const auto& edge = g.edge(e);
            if (pl.partition_.cluster_of(edge.lo) == pl.partition_.cluster_of(edge.hi))
                pl.subgraphs_.internal_edges[pl.partition_.cluster_of(edge.lo)].push_back(e);
            else
                ++pl.subgraphs_.crossing_edges;
        }

        std::vector<UpscaleEdge> edges;
        for (const auto& e : j.at("upscale_edges"))
            edges.push_back({e.at(0).get<ClusterId>(), e.at(1).get<ClusterId>(), e.at(2).get<double>()});
        pl.upscale_ = upscale_graph_from_edges(g, pl.partition_, pl.representatives_, std::move(edges));

        const auto& stream = j.at("stream");
        const auto mode = parse_replay_mode(stream.at("mode").get<std::string>());
        if (!mode)
            throw DataError("pipeline archive: unknown stream mode");
        std::vector<NodeId> obs;
        for (const auto& label : stream.at("observations"))
            obs.push_back(g.require(label.get<std::string>()));
        pl.stream_ = ObservationStream(std::move(obs), *mode, stream.at("seed").get<std::uint64_t>());
        if (*mode == ReplayMode::resumable)
            pl.stream_.set_cursor(stream.at("cursor").get<std::size_t>());

        if (!j.at("central").is_null()) {
            const auto central = j.at("central").get<ClusterId>();
            if (central >= k)
                throw DataError("pipeline archive: central cluster out of range");
            pl.central_ = central;
            pl.multiscale_ = build_multiscale_graph(g, pl.partition_, pl.subgraphs_, pl.upscale_, central);
        }
        return pl;
    } catch (const json::exception& e) {
        throw DataError(std::string("malformed pipeline archive: ") + e.what());
    }
}

} // namespace gbary
