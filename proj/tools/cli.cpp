#include "cli.hpp"

#include "gbary/annealing.hpp"
#include "gbary/error.hpp"
#include "gbary/metric_graph.hpp"
#include "gbary/multiscale.hpp"
#include "gbary/observation_stream.hpp"
#include "gbary/oracle.hpp"
#include "gbary/partition.hpp"
#include "gbary/random.hpp"
#include "gbary/report.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <optional>
#include <sstream>
#include <thread>

namespace gbary::cli {
namespace {

class UsageError : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

struct Options
{
    std::string graph;
    std::string obs;
    std::string partition;
    std::size_t k = 0;
    std::string mode = "single";
    std::string beta = "log";
    double beta_mult = 1.0;
    double tmax_mult = 1.0;
    double obs_mult = 1.0;
    double drift_gain = ScheduleOptions{}.drift_gain;
    double noise_scale = ScheduleOptions{}.noise_scale;
    double alpha_power = ScheduleOptions{}.alpha_power;
    std::uint64_t s_star = 1000;
    std::string obs_mode = "replay";
    std::uint64_t seed = 0;
    std::size_t runs = 100;
    std::string state;
    std::string state_out;
    std::string out;
    std::string coords;
    std::string records;
    std::string trajectory;
    std::size_t trajectory_stride = 1;
    std::vector<std::string> marks;
    unsigned threads = 0;
    bool timing = false;
    double md_scale = 1.0;
    double budget = kDefaultOracleBudget;
    std::size_t count = 0;
};

std::string hex(std::uint64_t v)
{
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
    return buf;
}

unsigned worker_count(const Options& o)
{
    if (o.threads)
        return o.threads;
    return std::max(1u, std::thread::hardware_concurrency());
}

ScheduleOptions schedule_options(const Options& o)
{
    if (!(o.beta_mult > 0.0) || !(o.tmax_mult > 0.0) || !(o.obs_mult > 0.0))
        throw UsageError("multipliers must be positive");
    if (!(o.drift_gain > 0.0) || !(o.noise_scale >= 0.0))
        throw UsageError("--drift-gain must be positive and --noise-scale nonnegative");
    ScheduleOptions s;
    s.beta_kind = *parse_beta_kind(o.beta);
    s.beta_mult = o.beta_mult;
    s.tmax_mult = o.tmax_mult;
    s.drift_gain = o.drift_gain;
    s.noise_scale = o.noise_scale;
    s.alpha_power = o.alpha_power;
    s.s_star = o.s_star;
    return s;
}

/// Keeps the first obs_mult share of the list (at least one observation).
ObservationStream scale_observations(const ObservationStream& stream, const Options& o)
{
    if (o.obs_mult == 1.0)
        return stream;
    if (o.obs_mult > 1.0)
        throw UsageError("--obs-mult above 1 needs a longer list; generate one with gen-obs --count");
    const auto keep = std::max<std::size_t>(
        1, static_cast<std::size_t>(std::ceil(o.obs_mult * static_cast<double>(stream.size()))));
    const auto all = stream.observations();
    return ObservationStream(std::vector<NodeId>(all.begin(), all.begin() + static_cast<std::ptrdiff_t>(keep)),
                             stream.mode(), stream.seed());
}

EstimationMode estimation_mode(const Options& o)
{
    return *parse_estimation_mode(o.mode);
}

ReplayMode replay_mode(const Options& o)
{
    return *parse_replay_mode(o.obs_mode);
}

Partition obtain_partition(const MetricGraph& g, const Options& o)
{
    const bool has_file = !o.partition.empty();
    const bool has_k = o.k > 0;
    if (has_file == has_k)
        throw UsageError("multiscale modes need exactly one of --partition or --k");
    if (has_file)
        return load_partition_file(o.partition, g);
    return balanced_partition(g, o.k, mix_seed(o.seed, seed_tag::partition));
}

void reject_partition_flags(const Options& o)
{
    if (!o.partition.empty() || o.k > 0)
        throw UsageError("--partition and --k only apply to multiscale modes");
}

/// Writes through `fn` to --out when set, otherwise to `fallback`.
void emit(const std::string& path, std::ostream& fallback, const std::function<void(std::ostream&)>& fn)
{
    if (path.empty()) {
        fn(fallback);
        return;
    }
    std::ofstream file(path);
    if (!file)
        throw DataError(path + ": cannot open for writing");
    fn(file);
    if (!file)
        throw DataError(path + ": write failed");
}

void put_graph(KeyValueReport& r, const MetricGraph& g)
{
    r.put("graph.nodes", static_cast<std::uint64_t>(g.node_count()));
    r.put("graph.edges", static_cast<std::uint64_t>(g.edge_count()));
    r.put("graph.hash", hex(g.content_hash()));
}

void put_partition(KeyValueReport& r, const Partition& p)
{
    const auto stats = size_stats(p);
    r.put("partition.clusters", static_cast<std::uint64_t>(p.cluster_count()));
    r.put("partition.smallest", static_cast<std::uint64_t>(stats.smallest));
    r.put("partition.largest", static_cast<std::uint64_t>(stats.largest));
    r.put("partition.hash", hex(p.content_hash()));
}

void write_pipeline_state(const MultiscalePipeline& pipeline, const std::string& path)
{
    std::ofstream file(path);
    if (!file)
        throw DataError(path + ": cannot open for writing");
    pipeline.save(file);
    if (!file)
        throw DataError(path + ": write failed");
}

int cmd_estimate(const Options& o, std::ostream& out)
{
    const auto g = load_graph_file(o.graph);
    const auto mode = estimation_mode(o);
    const auto schedule = schedule_options(o);
    auto stream =
        scale_observations(load_observations_file(o.obs, g, replay_mode(o), mix_seed(o.seed, seed_tag::stream)), o);

    KeyValueReport r("estimate");
    r.put("mode", to_string(mode));
    put_graph(r, g);
    r.put("observations", static_cast<std::uint64_t>(stream.size()));
    r.put("obs_mode", to_string(stream.mode()));

    if (mode == EstimationMode::single) {
        if (!o.state.empty())
            throw UsageError("--state only applies to multiscale modes");
        reject_partition_flags(o);
        EstimateOptions est;
        est.trajectory_stride = o.trajectory.empty() ? 0 : o.trajectory_stride;
        const auto report =
            estimate_barycenter(g, stream, default_schedule(g, schedule), mix_seed(o.seed, seed_tag::annealing), est);
        r.put("seed", o.seed);
        add_estimation(r, "", report, o.timing);
        if (!o.trajectory.empty())
            emit(o.trajectory, out, [&](std::ostream& s) { write_trajectory(s, g, report); });
    } else {
        auto partition = obtain_partition(g, o);
        put_partition(r, partition);
        MultiscaleOptions options;
        options.schedule = schedule;
        options.strategy = mode == EstimationMode::multiscale ? RepresentativeStrategy::per_cluster_barycenter
                                                              : RepresentativeStrategy::random;
        options.workers = worker_count(o);
        options.trajectory_stride = o.trajectory.empty() ? 0 : o.trajectory_stride;
        auto pipeline = MultiscalePipeline::build(g, std::move(partition), std::move(stream), options, o.seed);
        const auto report = pipeline.estimate();
        add_multiscale(r, report, o.timing);
        if (!o.trajectory.empty())
            emit(o.trajectory, out, [&](std::ostream& s) { write_trajectory(s, pipeline.multiscale()->graph, report.multiscale); });
        if (!o.state.empty())
            write_pipeline_state(pipeline, o.state);
    }
    emit(o.out, out, [&](std::ostream& s) { r.write(s); });
    return kOk;
}

int cmd_update(const Options& o, std::ostream& out)
{
    const auto g = load_graph_file(o.graph);
    std::ifstream in(o.state);
    if (!in)
        throw DataError(o.state + ": cannot open");
    auto pipeline = MultiscalePipeline::load(in, g);
    in.close();
    const auto added = load_observations_file(o.obs, g, ReplayMode::resumable, 0);
    const auto report = pipeline.update_online(added.observations());

    KeyValueReport r("update");
    r.put("mode", to_string(pipeline.options().strategy == RepresentativeStrategy::random
                                ? EstimationMode::multiscale_random
                                : EstimationMode::multiscale));
    put_graph(r, g);
    put_partition(r, pipeline.partition());
    r.put("observations_added", static_cast<std::uint64_t>(added.size()));
    r.put("observations", static_cast<std::uint64_t>(pipeline.stream().size()));
    add_multiscale(r, report, o.timing);
    write_pipeline_state(pipeline, o.state_out.empty() ? o.state : o.state_out);
    emit(o.out, out, [&](std::ostream& s) { r.write(s); });
    return kOk;
}

int cmd_bench(const Options& o, std::ostream& out)
{
    if (o.runs == 0)
        throw UsageError("--runs must be positive");
    const auto g = load_graph_file(o.graph);
    const auto mode = estimation_mode(o);
    const auto source = scale_observations(load_observations_file(o.obs, g, replay_mode(o), 0), o);
    const std::vector<NodeId> observations(source.observations().begin(), source.observations().end());
    const ReplayMode replay = source.mode();

    BenchConfig config;
    config.mode = mode;
    config.schedule = schedule_options(o);
    config.runs = o.runs;
    config.seed = o.seed;
    config.workers = worker_count(o);
    config.oracle_budget = o.budget;
    if (mode == EstimationMode::single)
        reject_partition_flags(o);
    else
        config.partition = obtain_partition(g, o);

    const auto result = success_ratio(
        g, [&](std::uint64_t seed) { return ObservationStream(observations, replay, seed); }, config);

    KeyValueReport r("bench");
    r.put("mode", to_string(mode));
    put_graph(r, g);
    if (config.partition)
        put_partition(r, *config.partition);
    r.put("observations", static_cast<std::uint64_t>(observations.size()));
    r.put("obs_mode", to_string(replay));
    r.put("seed", o.seed);
    add_schedule(r, "schedule", default_schedule(g, config.schedule));
    add_bench(r, g, result, o.md_scale, o.timing);
    emit(o.out, out, [&](std::ostream& s) { r.write(s); });
    if (!o.records.empty())
        emit(o.records, out, [&](std::ostream& s) { write_run_records(s, g, result, o.timing); });
    return kOk;
}

int cmd_partition(const Options& o, std::ostream& out)
{
    const auto g = load_graph_file(o.graph);
    const auto p = balanced_partition(g, o.k, mix_seed(o.seed, seed_tag::partition));
    emit(o.out, out, [&](std::ostream& s) { write_partition(s, g, p); });
    if (!o.out.empty()) {
        KeyValueReport r("partition");
        put_graph(r, g);
        put_partition(r, p);
        r.write(out);
    }
    return kOk;
}

int cmd_oracle(const Options& o, std::ostream& out)
{
    const auto g = load_graph_file(o.graph);
    const auto stream = load_observations_file(o.obs, g, ReplayMode::resumable, 0);
    const auto result = exact_barycenter(g, empirical_measure(stream, g.node_count()), o.budget, worker_count(o));

    KeyValueReport r("oracle");
    put_graph(r, g);
    r.put("observations", static_cast<std::uint64_t>(stream.size()));
    r.put("barycenter", g.label(result.barycenter));
    r.put("frechet_value", result.values[result.barycenter]);
    std::string ties;
    for (const auto n : result.minimizers) {
        if (!ties.empty())
            ties += ',';
        ties += g.label(n);
    }
    r.put("minimizers", ties);
    if (g.node_count() >= 2)
        r.put("mean_distance_to_all", mean_distance_to_all(g, result.barycenter));
    emit(o.out, out, [&](std::ostream& s) { r.write(s); });
    return kOk;
}

/// `<label> <x> <y>` per line.
std::vector<std::optional<std::pair<std::string, std::string>>> load_coords(const std::string& path,
                                                                            const MetricGraph& g)
{
    std::ifstream in(path);
    if (!in)
        throw DataError(path + ": cannot open");
    std::vector<std::optional<std::pair<std::string, std::string>>> coords(g.node_count());
    std::string line;
    std::size_t number = 0;
    while (std::getline(in, line)) {
        ++number;
        const auto hash = line.find('#');
        if (hash != std::string::npos)
            line.erase(hash);
        std::istringstream fields(line);
        std::string label, x, y, extra;
        if (!(fields >> label))
            continue;
        if (!(fields >> x >> y) || (fields >> extra))
            throw DataError(path, number, "expected '<node> <x> <y>'");
        const auto node = g.find(label);
        if (!node)
            throw DataError(path, number, "unknown node '" + label + "'");
        coords[*node] = std::make_pair(x, y);
    }
    return coords;
}

/// Counts the `returned` column of a bench records file.
std::map<NodeId, std::size_t> load_record_counts(const std::string& path, const MetricGraph& g)
{
    std::ifstream in(path);
    if (!in)
        throw DataError(path + ": cannot open");
    std::map<NodeId, std::size_t> counts;
    std::string line;
    std::size_t number = 0;
    while (std::getline(in, line)) {
        ++number;
        if (line.empty() || line.front() == '#')
            continue;
        std::istringstream fields(line);
        std::string run, seed, label;
        if (!(fields >> run >> seed >> label))
            throw DataError(path, number, "expected '<run> <seed> <returned> <success>'");
        ++counts[g.require(label)];
    }
    return counts;
}

int cmd_export_plot(const Options& o, std::ostream& out)
{
    const auto g = load_graph_file(o.graph);
    const auto coords = load_coords(o.coords, g);
    std::vector<double> weight(g.node_count(), 0.0);
    if (!o.obs.empty()) {
        const auto stream = load_observations_file(o.obs, g, ReplayMode::resumable, 0);
        const auto m = empirical_measure(stream, g.node_count());
        for (NodeId n = 0; n < g.node_count(); ++n)
            weight[n] = m.normalized(n);
    }
    std::vector<bool> marked(g.node_count(), false);
    for (const auto& label : o.marks)
        marked[g.require(label)] = true;
    std::map<NodeId, std::size_t> returned;
    if (!o.records.empty())
        returned = load_record_counts(o.records, g);

    emit(o.out, out, [&](std::ostream& s) {
        s << "node,x,y,weight,marked,returned\n";
        for (NodeId n = 0; n < g.node_count(); ++n) {
            s << g.label(n) << ',';
            if (coords[n])
                s << coords[n]->first << ',' << coords[n]->second;
            else
                s << ',';
            const auto it = returned.find(n);
            s << ',' << format_double(weight[n]) << ',' << (marked[n] ? 1 : 0) << ','
              << (it == returned.end() ? 0 : it->second) << '\n';
        }
    });
    return kOk;
}

int cmd_gen_obs(const Options& o, std::ostream& out)
{
    const auto g = load_graph_file(o.graph);
    emit(o.out, out, [&](std::ostream& s) {
        if (o.count == 0) {
            for (NodeId n = 0; n < g.node_count(); ++n)
                s << g.label(n) << '\n';
            return;
        }
        Rng rng(mix_seed(o.seed, seed_tag::stream));
        std::uniform_int_distribution<NodeId> pick(0, static_cast<NodeId>(g.node_count() - 1));
        const auto count = static_cast<std::size_t>(std::llround(static_cast<double>(o.count) * o.obs_mult));
        for (std::size_t i = 0; i < count; ++i)
            s << g.label(pick(rng)) << '\n';
    });
    return kOk;
}

void add_schedule_flags(CLI::App* cmd, Options& o)
{
    cmd->add_option("--beta", o.beta, "Temperature schedule shape")->check(CLI::IsMember({"log", "linear"}));
    cmd->add_option("--beta-mult", o.beta_mult, "Multiplier on the default beta constant");
    cmd->add_option("--tmax-mult", o.tmax_mult, "Multiplier on the default stopping time");
    cmd->add_option("--s-star", o.s_star, "Observation budget per estimation")->check(CLI::PositiveNumber);
    cmd->add_option("--obs-mult", o.obs_mult, "Share of the observation list to use (at most 1)")
        ->check(CLI::PositiveNumber);
    cmd->add_option("--drift-gain", o.drift_gain, "Final drift fraction times the observation budget");
    cmd->add_option("--noise-scale", o.noise_scale, "Brownian length unit relative to the mean edge length");
    cmd->add_option("--alpha-power", o.alpha_power, "Exponent of the increasing arrival intensity")
        ->check(CLI::NonNegativeNumber);
    cmd->add_option("--obs-mode", o.obs_mode, "Observation usage")
        ->check(CLI::IsMember({"subsample", "replay", "resume"}));
}

void add_multiscale_flags(CLI::App* cmd, Options& o)
{
    cmd->add_option("--mode", o.mode, "Estimation strategy")
        ->check(CLI::IsMember({"single", "multiscale", "multiscale-random"}));
    auto* part = cmd->add_option("--partition", o.partition, "Partition file (<node> <cluster>)");
    auto* k = cmd->add_option("--k", o.k, "Cluster count for a balanced partition")->check(CLI::PositiveNumber);
    part->excludes(k);
}

} // namespace

int run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Graph barycenter estimation by simulated annealing", "gbary"};
    app.require_subcommand(1);
    Options o;

    auto* estimate = app.add_subcommand("estimate", "Estimate the barycenter once");
    estimate->add_option("--graph", o.graph, "Edge list")->required();
    estimate->add_option("--obs", o.obs, "Observation file")->required();
    add_multiscale_flags(estimate, o);
    add_schedule_flags(estimate, o);
    estimate->add_option("--seed", o.seed);
    estimate->add_option("--state", o.state, "Save the multiscale pipeline here");
    estimate->add_option("--threads", o.threads, "Workers for per-cluster estimation");
    estimate->add_option("--trajectory", o.trajectory, "Dump drift steps here");
    estimate->add_option("--trajectory-stride", o.trajectory_stride)->check(CLI::PositiveNumber);
    estimate->add_option("--out", o.out);
    estimate->add_flag("--timing", o.timing, "Include wall times");

    auto* update = app.add_subcommand("update", "Append observations to a saved pipeline and re-estimate");
    update->add_option("--graph", o.graph)->required();
    update->add_option("--state", o.state, "Pipeline archive")->required();
    update->add_option("--obs", o.obs, "New observations")->required();
    update->add_option("--state-out", o.state_out, "Write the updated archive here instead of --state");
    update->add_option("--out", o.out);
    update->add_flag("--timing", o.timing);

    auto* bench = app.add_subcommand("bench", "Success ratio and MD over seeded runs");
    bench->add_option("--graph", o.graph)->required();
    bench->add_option("--obs", o.obs)->required();
    add_multiscale_flags(bench, o);
    add_schedule_flags(bench, o);
    bench->add_option("--seed", o.seed);
    bench->add_option("--runs", o.runs);
    bench->add_option("--threads", o.threads, "Worker pool size (default: all cores)");
    bench->add_option("--records", o.records, "Per-run records file");
    bench->add_option("--md-scale", o.md_scale, "Display divisor for MD")->check(CLI::PositiveNumber);
    bench->add_option("--budget", o.budget, "Oracle limit on support x nodes");
    bench->add_option("--out", o.out);
    bench->add_flag("--timing", o.timing);

    auto* partition = app.add_subcommand("partition", "Balanced partition into k connected clusters");
    partition->add_option("--graph", o.graph)->required();
    partition->add_option("--k", o.k)->required()->check(CLI::PositiveNumber);
    partition->add_option("--seed", o.seed);
    partition->add_option("--out", o.out);

    auto* oracle = app.add_subcommand("oracle", "Exact barycenter of the observed measure");
    oracle->add_option("--graph", o.graph)->required();
    oracle->add_option("--obs", o.obs)->required();
    oracle->add_option("--budget", o.budget, "Limit on support x nodes");
    oracle->add_option("--threads", o.threads);
    oracle->add_option("--out", o.out);

    auto* plot = app.add_subcommand("export-plot", "Nodes, coordinates and barycenters as CSV");
    plot->add_option("--graph", o.graph)->required();
    plot->add_option("--coords", o.coords, "<node> <x> <y> per line")->required();
    plot->add_option("--obs", o.obs, "Adds the observed weight column");
    plot->add_option("--mark", o.marks, "Node to flag (repeatable)");
    plot->add_option("--records", o.records, "Bench records to count");
    plot->add_option("--out", o.out);

    auto* gen = app.add_subcommand("gen-obs", "Uniform observations (every node once when --count is 0)");
    gen->add_option("--graph", o.graph)->required();
    gen->add_option("--count", o.count);
    gen->add_option("--obs-mult", o.obs_mult, "Multiplier on --count")->check(CLI::PositiveNumber);
    gen->add_option("--seed", o.seed);
    gen->add_option("--out", o.out);

    try {
        app.parse(std::vector<std::string>(args.rbegin(), args.rend()));
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kOk : kUsage;
    }

    try {
        if (*estimate)
            return cmd_estimate(o, out);
        if (*update)
            return cmd_update(o, out);
        if (*bench)
            return cmd_bench(o, out);
        if (*partition)
            return cmd_partition(o, out);
        if (*oracle)
            return cmd_oracle(o, out);
        if (*plot)
            return cmd_export_plot(o, out);
        if (*gen)
            return cmd_gen_obs(o, out);
    } catch (const UsageError& e) {
        err << "gbary: " << e.what() << '\n' << app.get_subcommands().front()->help();
        return kUsage;
    } catch (const std::invalid_argument& e) {
        err << "gbary: " << e.what() << '\n';
        return kUsage;
    } catch (const std::exception& e) {
        err << "gbary: " << e.what() << '\n';
        return kData;
    }
    return kUsage;
}

} // namespace gbary::cli
