#include "support.hpp"

#include "gbary/report.hpp"

#include <doctest.h>

#include <sstream>

using namespace gbary;
using namespace gbary::testing;

TEST_CASE("shortest round-trip doubles")
{
    CHECK(format_double(2.0) == "2");
    CHECK(format_double(0.1) == "0.1");
    CHECK(format_double(2.0 / 3.0) == "0.6666666666666666");
    CHECK(std::stod(format_double(1.0 / 7.0)) == 1.0 / 7.0);
}

TEST_CASE("reports keep insertion order behind the schema header")
{
    KeyValueReport r("demo");
    r.put("b", std::uint64_t{3});
    r.put("a", 0.5);
    r.put("c", true);
    r.put("d", "text");
    CHECK(r.str() == "schema=gbary-report/1\nkind=demo\nb=3\na=0.5\nc=true\nd=text\n");
}

TEST_CASE("estimation reports are reproducible")
{
    const auto g = random_graph(40, 20, 3);
    const auto render = [&] {
        auto s = uniform_stream(g, 5);
        const auto e = estimate_barycenter(g, s, default_schedule(g), 6);
        KeyValueReport r("estimate");
        add_estimation(r, "", e, false);
        return r.str();
    };
    const auto a = render();
    CHECK(a == render());
    CHECK(a.find("wall_seconds") == std::string::npos);
    CHECK(a.find("schedule.t_max=104") != std::string::npos);
}

TEST_CASE("bench reports and run records")
{
    const auto g = p3();
    BenchResult b;
    b.runs = 4;
    b.successes = 3;
    b.truth = {1};
    b.records = {{11, 1, true, 0.5}, {12, 0, false, 0.25}, {13, 1, true, 0.5}, {14, 1, true, 0.5}};
    b.frequencies = {{0, 1}, {1, 3}};
    b.mean_distance = 0.5;
    KeyValueReport r("bench");
    add_bench(r, g, b, 1000.0, true);
    const auto s = r.str();
    CHECK(s.find("success_ratio=0.75\n") != std::string::npos);
    CHECK(s.find("oracle_barycenter=b\n") != std::string::npos);
    CHECK(s.find("md=0.5\nmd_scale=1000\nmd_scaled=5e-04\n") != std::string::npos);
    CHECK(s.find("returned.b=3\nreturned.a=1\n") != std::string::npos);
    CHECK(s.find("wall_seconds_total=1.75\n") != std::string::npos);

    std::ostringstream rec;
    write_run_records(rec, g, b, false);
    CHECK(rec.str() == "# run seed returned success\n0 11 b 1\n1 12 a 0\n2 13 b 1\n3 14 b 1\n");
}
