#include "gbary/report.hpp"

#include <algorithm>
#include <charconv>
#include <ostream>
#include <sstream>

namespace gbary {

std::string format_double(double value)
{
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, value);
    return std::string(buf, res.ptr);
}

KeyValueReport::KeyValueReport(std::string_view kind)
{
    put("schema", kReportSchema);
    put("kind", kind);
}

void KeyValueReport::put(std::string_view key, std::string_view value)
{
    entries_.emplace_back(std::string(key), std::string(value));
}

void KeyValueReport::put(std::string_view key, double value)
{
    put(key, format_double(value));
}

void KeyValueReport::put(std::string_view key, std::uint64_t value)
{
    put(key, std::to_string(value));
}

void KeyValueReport::write(std::ostream& out) const
{
    for (const auto& [k, v] : entries_)
        out << k << '=' << v << '\n';
}

std::string KeyValueReport::str() const
{
    std::ostringstream out;
    write(out);
    return out.str();
}

namespace {

std::string key(std::string_view prefix, std::string_view name)
{
    std::string k(prefix);
    if (!k.empty())
        k += '.';
    k += name;
    return k;
}

} // namespace

void add_schedule(KeyValueReport& r, std::string_view prefix, const ScheduleConfig& s)
{
    r.put(key(prefix, "beta_kind"), to_string(s.beta_kind));
    r.put(key(prefix, "beta_const"), s.beta_const);
    r.put(key(prefix, "alpha_const"), s.alpha_const);
    r.put(key(prefix, "alpha_power"), s.alpha_power);
    r.put(key(prefix, "t_max"), s.t_max);
    r.put(key(prefix, "s_star"), s.s_star);
    r.put(key(prefix, "diffusion_length"), s.diffusion_length);
}

void add_estimation(KeyValueReport& r, std::string_view prefix, const EstimationReport& e, bool timing)
{
    r.put(key(prefix, "barycenter"), e.barycenter_label);
    r.put(key(prefix, "final_position"), e.final_position_text);
    r.put(key(prefix, "observations_used"), static_cast<std::uint64_t>(e.observations_used));
    r.put(key(prefix, "nodes"), static_cast<std::uint64_t>(e.node_count));
    r.put(key(prefix, "rng_seed"), e.seed);
    add_schedule(r, key(prefix, "schedule"), e.schedule);
    if (timing)
        r.put(key(prefix, "wall_seconds"), e.wall_seconds);
}

void add_multiscale(KeyValueReport& r, const MultiscaleReport& m, bool timing)
{
    r.put("barycenter", m.barycenter_label);
    r.put("upscale_barycenter", m.upscale_barycenter_label);
    r.put("central_cluster", m.central_name);
    r.put("central_changed", m.central_changed);
    r.put("multiscale_rebuilt", m.multiscale_rebuilt);
    r.put("upscale_nodes", static_cast<std::uint64_t>(m.upscale_nodes));
    r.put("multiscale_nodes", static_cast<std::uint64_t>(m.multiscale_nodes));
    r.put("seed", m.seed);
    add_estimation(r, "upscale", m.upscale, timing);
    add_estimation(r, "multiscale", m.multiscale, timing);
    if (timing)
        r.put("wall_seconds", m.wall_seconds);
}

void add_bench(KeyValueReport& r, const MetricGraph& g, const BenchResult& b, double md_scale, bool timing)
{
    r.put("runs", static_cast<std::uint64_t>(b.runs));
    r.put("successes", static_cast<std::uint64_t>(b.successes));
    r.put("success_ratio", b.ratio());
    std::string truth;
    for (const auto n : b.truth) {
        if (!truth.empty())
            truth += ',';
        truth += g.label(n);
    }
    r.put("oracle_barycenter", truth);
    r.put("md", b.mean_distance);
    if (md_scale != 1.0) {
        r.put("md_scale", md_scale);
        r.put("md_scaled", b.mean_distance / md_scale);
    }
    r.put("distinct_returned", static_cast<std::uint64_t>(b.frequencies.size()));
    // Most frequent first, ties by node id.
    std::vector<std::pair<NodeId, std::size_t>> freq(b.frequencies.begin(), b.frequencies.end());
    std::stable_sort(freq.begin(), freq.end(), [](const auto& x, const auto& y) { return x.second > y.second; });
    for (const auto& [node, count] : freq)
        r.put("returned." + g.label(node), static_cast<std::uint64_t>(count));
    if (timing) {
        double total = 0.0;
        for (const auto& rec : b.records)
            total += rec.wall_seconds;
        r.put("wall_seconds_total", total);
    }
}

void write_run_records(std::ostream& out, const MetricGraph& g, const BenchResult& b, bool timing)
{
    out << "# run seed returned success" << (timing ? " wall_seconds" : "") << '\n';
    for (std::size_t i = 0; i < b.records.size(); ++i) {
        const auto& rec = b.records[i];
        out << i << ' ' << rec.seed << ' ' << g.label(rec.returned) << ' ' << (rec.success ? 1 : 0);
        if (timing)
            out << ' ' << format_double(rec.wall_seconds);
        out << '\n';
    }
}

} // namespace gbary
