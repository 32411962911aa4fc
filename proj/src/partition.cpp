#include "gbary/partition.hpp"

#include "gbary/error.hpp"
#include "gbary/parallel.hpp"
#include "gbary/random.hpp"
#include "gbary/shortest_path.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <queue>
#include <set>
#include <sstream>
#include <stdexcept>
#include <unordered_map>

namespace gbary {

Partition::Partition(std::vector<ClusterId> assignment, std::size_t cluster_count, std::vector<std::string> names)
    : assignment_(std::move(assignment)), members_(cluster_count), names_(std::move(names))
{
    if (names_.empty()) {
        names_.reserve(cluster_count);
        for (std::size_t c = 0; c < cluster_count; ++c)
            names_.push_back(std::to_string(c));
    }
    if (names_.size() != cluster_count)
        throw std::invalid_argument("cluster name count does not match cluster count");
    for (NodeId n = 0; n < assignment_.size(); ++n) {
        const ClusterId c = assignment_[n];
        if (c >= cluster_count)
            throw std::invalid_argument("cluster id out of range");
        members_[c].push_back(n);
    }
}

std::uint64_t Partition::content_hash() const noexcept
{
    std::uint64_t h = mix_seed(assignment_.size(), members_.size());
    for (const auto c : assignment_)
        h = mix_seed(h, c);
    return h;
}

namespace {

std::optional<long long> as_integer(const std::string& s)
{
    long long v = 0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size())
        return std::nullopt;
    return v;
}

} // namespace

Partition load_partition(std::istream& in, const MetricGraph& g, const std::string& source)
{
    std::vector<std::string> cluster_of(g.node_count());
    std::vector<std::size_t> assigned_at(g.node_count(), 0);
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos || line[first] == '#')
            continue;
        std::istringstream fields(line);
        std::string node, cluster, extra;
        if (!(fields >> node >> cluster) || (fields >> extra))
            throw DataError(source, line_no, "malformed partition line, expected '<node> <cluster-id>'");
        const auto id = g.find(node);
        if (!id)
            throw DataError(source, line_no, "unknown node '" + node + "'");
        if (assigned_at[*id] != 0)
            throw DataError(source, line_no,
                            "node '" + node + "' assigned twice (first on line " + std::to_string(assigned_at[*id]) + ")");
        assigned_at[*id] = line_no;
        cluster_of[*id] = std::move(cluster);
    }
    for (NodeId n = 0; n < g.node_count(); ++n)
        if (assigned_at[n] == 0)
            throw DataError(source, 0, "node '" + g.label(n) + "' has no cluster");

    std::vector<std::string> names(cluster_of.begin(), cluster_of.end());
    std::sort(names.begin(), names.end());
    names.erase(std::unique(names.begin(), names.end()), names.end());
    const bool numeric = std::all_of(names.begin(), names.end(), [](const auto& s) { return as_integer(s).has_value(); });
    if (numeric)
        std::sort(names.begin(), names.end(), [](const auto& a, const auto& b) { return *as_integer(a) < *as_integer(b); });
    std::unordered_map<std::string, ClusterId> dense;
    for (ClusterId c = 0; c < names.size(); ++c)
        dense.emplace(names[c], c);
    std::vector<ClusterId> assignment(g.node_count());
    for (NodeId n = 0; n < g.node_count(); ++n)
        assignment[n] = dense.at(cluster_of[n]);
    const std::size_t count = names.size();
    return Partition(std::move(assignment), count, std::move(names));
}

Partition load_partition_file(const std::filesystem::path& path, const MetricGraph& g)
{
    std::ifstream in(path);
    if (!in)
        throw DataError(path.string(), 0, "cannot open partition file");
    return load_partition(in, g, path.string());
}

void write_partition(std::ostream& out, const MetricGraph& g, const Partition& p)
{
    for (NodeId n = 0; n < g.node_count(); ++n)
        out << g.label(n) << ' ' << p.name(p.cluster_of(n)) << '\n';
}

namespace {

/// Lowers `best` to the distance from `source` wherever that is smaller,
/// exploring only the region where it improves.
void lower_distances(const MetricGraph& g, NodeId source, std::vector<double>& best)
{
    using Entry = std::pair<double, NodeId>;
    std::priority_queue<Entry, std::vector<Entry>, std::greater<>> heap;
    best[source] = 0.0;
    heap.emplace(0.0, source);
    while (!heap.empty()) {
        const auto [d, u] = heap.top();
        heap.pop();
        if (d > best[u])
            continue;
        for (const auto& h : g.neighbors(u)) {
            const double nd = d + g.edge(h.edge).length;
            if (nd < best[h.neighbor]) {
                best[h.neighbor] = nd;
                heap.emplace(nd, h.neighbor);
            }
        }
    }
}

NodeId farthest(const std::vector<double>& dist)
{
    NodeId arg = 0;
    for (NodeId n = 1; n < dist.size(); ++n)
        if (dist[n] > dist[arg])
            arg = n;
    return arg;
}

} // namespace

Partition balanced_partition(const MetricGraph& g, std::size_t k, std::uint64_t seed)
{
    const std::size_t n = g.node_count();
    if (k == 0)
        throw std::invalid_argument("cluster count must be positive");
    if (k > n)
        throw DataError("cluster count " + std::to_string(k) + " exceeds node count " + std::to_string(n));
    if (!g.is_connected())
        throw DataError("graph is not connected");

    Rng rng(mix_seed(seed, seed_tag::partition));
    const auto start = static_cast<NodeId>(std::uniform_int_distribution<std::size_t>(0, n - 1)(rng));

    std::vector<double> nearest_seed(n, kUnreachable);
    lower_distances(g, start, nearest_seed);
    std::vector<NodeId> seeds{farthest(nearest_seed)};
    std::fill(nearest_seed.begin(), nearest_seed.end(), kUnreachable);
    lower_distances(g, seeds.front(), nearest_seed);
    while (seeds.size() < k) {
        const NodeId s = farthest(nearest_seed);
        seeds.push_back(s);
        lower_distances(g, s, nearest_seed);
    }

    using Entry = std::pair<double, NodeId>;
    using Frontier = std::priority_queue<Entry, std::vector<Entry>, std::greater<>>;
    std::vector<Frontier> frontier(k);
    std::vector<std::size_t> size(k, 0);
    std::vector<ClusterId> assignment(n, kNoCluster);
    std::set<std::pair<std::size_t, ClusterId>> growing;

    const auto expand = [&](ClusterId c, NodeId node, double d) {
        for (const auto& h : g.neighbors(node))
            if (assignment[h.neighbor] == kNoCluster)
                frontier[c].emplace(d + g.edge(h.edge).length, h.neighbor);
    };
    for (ClusterId c = 0; c < k; ++c)
        assignment[seeds[c]] = c;
    for (ClusterId c = 0; c < k; ++c) {
        size[c] = 1;
        expand(c, seeds[c], 0.0);
        growing.emplace(size[c], c);
    }

    while (!growing.empty()) {
        const auto [sz, c] = *growing.begin();
        growing.erase(growing.begin());
        auto& f = frontier[c];
        while (!f.empty() && assignment[f.top().second] != kNoCluster)
            f.pop();
        if (f.empty())
            continue;
        const auto [d, node] = f.top();
        f.pop();
        assignment[node] = c;
        ++size[c];
        expand(c, node, d);
        growing.emplace(size[c], c);
    }
    return Partition(std::move(assignment), k);
}

PartitionSizeStats size_stats(const Partition& p)
{
    PartitionSizeStats s;
    if (p.cluster_count() == 0)
        return s;
    s.smallest = p.node_count();
    for (ClusterId c = 0; c < p.cluster_count(); ++c) {
        s.smallest = std::min(s.smallest, p.members(c).size());
        s.largest = std::max(s.largest, p.members(c).size());
    }
    s.imbalance = s.smallest ? static_cast<double>(s.largest) / static_cast<double>(s.smallest) : kUnreachable;
    return s;
}

ValidityReport validate_partition(const MetricGraph& g, const Partition& p, unsigned workers)
{
    if (p.node_count() != g.node_count())
        throw std::invalid_argument("partition does not cover the graph");
    const std::size_t k = p.cluster_count();
    std::vector<char> connected(k, 1);
    workers = resolve_workers(workers, k);
    std::vector<std::vector<char>> seen(workers, std::vector<char>(g.node_count(), 0));

    parallel_for(k, workers, [&](std::size_t c, unsigned w) {
        const auto members = p.members(static_cast<ClusterId>(c));
        if (members.empty()) {
            connected[c] = 0;
            return;
        }
        auto& mark = seen[w];
        std::vector<NodeId> stack{members.front()};
        mark[members.front()] = 1;
        std::size_t reached = 1;
        while (!stack.empty()) {
            const NodeId u = stack.back();
            stack.pop_back();
            for (const auto& h : g.neighbors(u)) {
                const NodeId v = h.neighbor;
                if (!mark[v] && p.cluster_of(v) == c) {
                    mark[v] = 1;
                    ++reached;
                    stack.push_back(v);
                }
            }
        }
        for (const auto m : members)
            mark[m] = 0;
        connected[c] = reached == members.size();
    });

    ValidityReport report;
    for (ClusterId c = 0; c < k; ++c) {
        if (p.members(c).empty())
            report.empty_clusters.push_back(c);
        else if (!connected[c])
            report.disconnected_clusters.push_back(c);
    }
    report.valid = report.empty_clusters.empty() && report.disconnected_clusters.empty();
    return report;
}

Subgraphs extract_subgraphs(const MetricGraph& g, const Partition& p)
{
    if (p.node_count() != g.node_count())
        throw std::invalid_argument("partition does not cover the graph");
    Subgraphs s;
    s.internal_edges.resize(p.cluster_count());
    s.boundaries.resize(p.cluster_count());
    const auto assignment = p.assignment();
    const auto edges = g.edges();
    for (EdgeId id = 0; id < edges.size(); ++id) {
        const auto& e = edges[id];
        const ClusterId i = assignment[e.lo];
        const ClusterId j = assignment[e.hi];
        if (i == j) {
            s.internal_edges[i].push_back(id);
            continue;
        }
        auto& bi = s.boundaries[i];
        auto& bj = s.boundaries[j];
        bi.push_back({e.lo, e.hi, e.length, j, std::nullopt, bj.size()});
        bj.push_back({e.hi, e.lo, e.length, i, std::nullopt, bi.size() - 1});
        ++s.crossing_edges;
    }
    return s;
}

MetricGraph cluster_graph(const MetricGraph& g, const Partition& p, const Subgraphs& s, ClusterId c)
{
    return induced_subgraph(g, p.members(c), s.internal_edges.at(c));
}

} // namespace gbary
