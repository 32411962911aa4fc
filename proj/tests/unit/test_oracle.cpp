#include "support.hpp"

#include "gbary/error.hpp"
#include "gbary/oracle.hpp"
#include "gbary/shortest_path.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>

using namespace gbary;
using namespace gbary::testing;

namespace {

EmpiricalMeasure uniform_measure(const MetricGraph& g)
{
    EmpiricalMeasure m(g.node_count());
    for (NodeId n = 0; n < g.node_count(); ++n)
        m.add(n);
    return m;
}

EmpiricalMeasure random_measure(std::size_t n, std::uint64_t seed)
{
    Rng rng(seed);
    EmpiricalMeasure m(n);
    for (int i = 0; i < 300; ++i)
        m.add(std::uniform_int_distribution<NodeId>(0, static_cast<NodeId>(n - 1))(rng));
    return m;
}

MetricGraph scaled(const MetricGraph& g, double factor)
{
    GraphBuilder b;
    for (const auto& label : g.labels())
        b.add_node(label);
    for (const auto& e : g.edges())
        b.add_edge(g.label(e.lo), g.label(e.hi), e.length * factor);
    return b.build();
}

StreamFactory every_node_factory(const MetricGraph& g)
{
    return [&g](std::uint64_t seed) { return uniform_stream(g, seed); };
}

} // namespace

TEST_CASE("oracle on P3")
{
    const auto g = p3();
    const auto r = exact_barycenter(g, uniform_measure(g));
    CHECK(r.barycenter == 1);
    CHECK(r.minimizers == std::vector<NodeId>{1});
    CHECK(r.values[1] == doctest::Approx(2.0 / 3.0));

    EmpiricalMeasure skewed(3);
    skewed.add(0, 0.8);
    skewed.add(1, 0.1);
    skewed.add(2, 0.1);
    const auto s = exact_barycenter(g, skewed);
    CHECK(s.barycenter == 0);
    CHECK(s.values[0] == doctest::Approx(0.5));

    EmpiricalMeasure point(3);
    point.add(2);
    const auto pt = exact_barycenter(g, point);
    CHECK(pt.barycenter == 2);
    CHECK(pt.values[2] == 0.0);
}

TEST_CASE("oracle ties report every minimizer")
{
    const auto g = path_graph(3);
    const auto r = exact_barycenter(g, uniform_measure(g));
    CHECK(r.minimizers == std::vector<NodeId>{1, 2});
    CHECK(r.barycenter == 1);
}

TEST_CASE("oracle values match Floyd-Warshall and the Frechet function")
{
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        const auto g = random_graph(30 + 7 * seed, 20, seed);
        const auto m = random_measure(g.node_count(), seed);
        const auto fw = floyd_warshall(g);
        const auto r = exact_barycenter(g, m, kDefaultOracleBudget, 3);
        double best = std::numeric_limits<double>::infinity();
        for (NodeId x = 0; x < g.node_count(); ++x) {
            double f = 0.0;
            for (NodeId y = 0; y < g.node_count(); ++y)
                f += fw[x][y] * fw[x][y] * m.normalized(y);
            CHECK(r.values[x] == doctest::Approx(f).epsilon(1e-12));
            CHECK(frechet_value(g, x, m) == doctest::Approx(f).epsilon(1e-12));
            best = std::min(best, f);
        }
        CHECK(r.values[r.barycenter] == doctest::Approx(best).epsilon(1e-12));
    }
}

TEST_CASE("oracle result does not depend on the worker count")
{
    const auto g = random_graph(300, 200, 4);
    const auto m = uniform_measure(g);
    const auto a = exact_barycenter(g, m, kDefaultOracleBudget, 1);
    const auto b = exact_barycenter(g, m, kDefaultOracleBudget, 4);
    CHECK(a.values == b.values);
    CHECK(a.minimizers == b.minimizers);
}

TEST_CASE("oracle argmin is invariant under rescaling")
{
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        const auto g = random_graph(50, 30, 500 + seed);
        const auto m = random_measure(50, seed);
        const auto base = exact_barycenter(g, m);
        for (double c : {0.001, 3.0, 1000.0}) {
            const auto r = exact_barycenter(scaled(g, c), m);
            CHECK(r.barycenter == base.barycenter);
        }
    }
}

TEST_CASE("oracle refusals")
{
    const auto g = random_graph(100, 50, 1);
    CHECK_THROWS_AS(exact_barycenter(g, uniform_measure(g), 1000.0), DataError);
    const auto split = parse_graph("a b 1\nc d 1\n");
    CHECK_THROWS_AS(exact_barycenter(split, uniform_measure(split)), DataError);
    CHECK_THROWS_AS(exact_barycenter(g, EmpiricalMeasure(100)), DataError);
}

TEST_CASE("mean pairwise distance")
{
    const auto g = p3();
    const std::vector<NodeId> same{1, 1, 1};
    CHECK(mean_pairwise_distance(g, same) == 0.0);
    const std::vector<NodeId> ac{0, 2};
    CHECK(mean_pairwise_distance(g, ac) == 2.0);
    // pairs of {a,a,b,c,c}: 1 zero, 2x1 (a-b), 4x2 (a-c), 2x1 (b-c), 1 zero
    const std::vector<NodeId> five{0, 0, 1, 2, 2};
    CHECK(mean_pairwise_distance(g, five) == doctest::Approx((2 * 1 + 4 * 2 + 2 * 1) / 10.0));
    const std::vector<NodeId> one{0};
    CHECK_THROWS_AS(mean_pairwise_distance(g, one), std::invalid_argument);

    const auto r = random_graph(40, 20, 2);
    const auto fw = floyd_warshall(r);
    std::vector<NodeId> pick{3, 17, 17, 25, 39, 0, 8};
    double sum = 0.0;
    for (std::size_t i = 0; i < pick.size(); ++i)
        for (std::size_t j = i + 1; j < pick.size(); ++j)
            sum += fw[pick[i]][pick[j]];
    const double expected = sum / 21.0;
    CHECK(mean_pairwise_distance(r, pick) == doctest::Approx(expected).epsilon(1e-12));
    std::reverse(pick.begin(), pick.end());
    CHECK(mean_pairwise_distance(r, pick) == doctest::Approx(expected).epsilon(1e-12));
    std::rotate(pick.begin(), pick.begin() + 3, pick.end());
    CHECK(mean_pairwise_distance(r, pick) == doctest::Approx(expected).epsilon(1e-12));
}

TEST_CASE("mean distance to all other nodes")
{
    const auto g = p3();
    CHECK(mean_distance_to_all(g, 1) == 1.0);
    CHECK(mean_distance_to_all(g, 0) == 1.5);
    const auto s = star4();
    CHECK(mean_distance_to_all(s, s.require("s")) == 1.0);
    WarningCapture quiet;
    CHECK_THROWS_AS(mean_distance_to_all(parse_graph("a a 1\n"), 0), std::invalid_argument);
}

TEST_CASE("estimation mode names")
{
    for (auto m : {EstimationMode::single, EstimationMode::multiscale, EstimationMode::multiscale_random})
        CHECK(parse_estimation_mode(to_string(m)) == m);
    CHECK(to_string(EstimationMode::multiscale_random) == "multiscale-random");
    CHECK_FALSE(parse_estimation_mode("double"));
}

TEST_CASE("Star4 bench")
{
    const auto g = star4();
    const std::vector<NodeId> leaves{g.require("x"), g.require("y"), g.require("z")};
    BenchConfig cfg;
    cfg.runs = 100;
    cfg.seed = 3;
    cfg.workers = 4;
    const auto b = success_ratio(
        g, [&](std::uint64_t seed) { return ObservationStream(leaves, ReplayMode::shuffle_replay, seed); }, cfg);
    CHECK(b.truth == std::vector<NodeId>{g.require("s")});
    CHECK(b.successes >= 95);
    CHECK(b.ratio() == doctest::Approx(b.successes / 100.0));
}

TEST_CASE("bench invariants")
{
    const auto g = random_graph(40, 20, 6);
    BenchConfig cfg;
    cfg.runs = 12;
    cfg.seed = 1;
    cfg.workers = 3;
    const auto b = success_ratio(g, every_node_factory(g), cfg);
    CHECK(b.runs == 12);
    CHECK(b.records.size() == 12);
    CHECK(b.successes <= b.runs);
    CHECK(b.mean_distance >= 0.0);
    std::size_t total = 0;
    for (const auto& [n, count] : b.frequencies)
        total += count;
    CHECK(total == 12);
    CHECK((b.mean_distance == 0.0) == (b.frequencies.size() == 1));
    for (std::size_t i = 0; i < 12; ++i) {
        CHECK(b.records[i].seed == run_seed(1, i));
        const bool hit = std::find(b.truth.begin(), b.truth.end(), b.records[i].returned) != b.truth.end();
        CHECK(b.records[i].success == hit);
    }

    cfg.workers = 1;
    const auto serial = success_ratio(g, every_node_factory(g), cfg);
    for (std::size_t i = 0; i < 12; ++i)
        CHECK(serial.records[i].returned == b.records[i].returned);
    CHECK(serial.mean_distance == b.mean_distance);
}

TEST_CASE("bench requires a partition for multiscale modes and a fixed observation list")
{
    const auto g = random_graph(40, 20, 6);
    BenchConfig cfg;
    cfg.runs = 2;
    cfg.mode = EstimationMode::multiscale;
    CHECK_THROWS(success_ratio(g, every_node_factory(g), cfg));
    cfg.mode = EstimationMode::single;
    const StreamFactory drifting = [&g](std::uint64_t seed) {
        return ObservationStream({static_cast<NodeId>(seed % g.node_count())}, ReplayMode::shuffle_replay, seed);
    };
    CHECK_THROWS(success_ratio(g, drifting, cfg));
}

TEST_CASE("multiscale bench with one cluster")
{
    const auto g = random_graph(40, 25, 16);
    BenchConfig cfg;
    cfg.runs = 10;
    cfg.mode = EstimationMode::multiscale_random;
    cfg.partition = Partition(std::vector<ClusterId>(40, 0), 1);
    cfg.workers = 2;
    const auto b = success_ratio(g, every_node_factory(g), cfg);
    CHECK(b.runs == 10);
    CHECK(b.successes <= 10);
}
