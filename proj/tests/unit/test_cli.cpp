#include "support.hpp"

#include "cli.hpp"

#include <doctest.h>

#include <unistd.h>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

namespace fs = std::filesystem;
using gbary::cli::run_command;

namespace {

struct Result
{
    int code;
    std::string out;
    std::string err;
};

Result run(std::vector<std::string> args)
{
    std::ostringstream out, err;
    const int code = run_command(args, out, err);
    return {code, out.str(), err.str()};
}

int scratch_counter = 0;

/// Scratch directory with a few small input files.
struct Workspace
{
    fs::path dir;

    Workspace()
    {
        dir = fs::temp_directory_path() / ("gbary-cli-" + std::to_string(scratch_counter++) + "-" + std::to_string(::getpid()));
        fs::remove_all(dir);
        fs::create_directories(dir);
        write("p3.edges", "a b 1\nb c 1\n");
        write("uniform.obs", "a\nb\nc\n");
        write("bad.edges", "a b 1\nb c\n");
        write("p3.coords", "a 0 0\nb 1 0\nc 2 0\n");
        std::ostringstream ring;
        for (int i = 0; i < 30; ++i)
            ring << gbary::testing::node_name(i) << ' ' << gbary::testing::node_name((i + 1) % 30) << " 1\n";
        ring << "n000 n015 3\nn007 n022 4\n";
        write("ring.edges", ring.str());
    }
    ~Workspace() { fs::remove_all(dir); }

    std::string path(const std::string& name) const { return (dir / name).string(); }
    void write(const std::string& name, const std::string& text) const { std::ofstream(dir / name) << text; }
    std::string read(const std::string& name) const
    {
        std::ifstream in(dir / name);
        std::stringstream s;
        s << in.rdbuf();
        return s.str();
    }
};

std::string value_of(const std::string& report, const std::string& key)
{
    std::istringstream in(report);
    std::string line;
    while (std::getline(in, line))
        if (line.rfind(key + "=", 0) == 0)
            return line.substr(key.size() + 1);
    return "<missing>";
}

} // namespace

TEST_CASE("oracle subcommand")
{
    Workspace w;
    const auto r = run({"oracle", "--graph", w.path("p3.edges"), "--obs", w.path("uniform.obs")});
    CHECK(r.code == 0);
    CHECK(value_of(r.out, "schema") == "gbary-report/1");
    CHECK(value_of(r.out, "barycenter") == "b");
    CHECK(value_of(r.out, "frechet_value") == "0.6666666666666666");
    CHECK(value_of(r.out, "mean_distance_to_all") == "1");
}

TEST_CASE("usage errors exit with 1")
{
    Workspace w;
    auto r = run({"estimate", "--graph", w.path("p3.edges")});
    CHECK(r.code == 1);
    CHECK(r.err.find("--obs") != std::string::npos);
    CHECK(run({}).code == 1);
    CHECK(run({"frobnicate"}).code == 1);
    CHECK(run({"estimate", "--graph", w.path("p3.edges"), "--obs", w.path("uniform.obs"), "--mode", "triple"}).code == 1);
    CHECK(run({"estimate", "--graph", w.path("p3.edges"), "--obs", w.path("uniform.obs"), "--mode", "multiscale"}).code ==
          1);
    CHECK(run({"estimate", "--graph", w.path("p3.edges"), "--obs", w.path("uniform.obs"), "--k", "2"}).code == 1);
    CHECK(run({"estimate", "--graph", w.path("p3.edges"), "--obs", w.path("uniform.obs"), "--beta-mult", "0"}).code == 1);
    CHECK(run({"estimate", "--graph", w.path("p3.edges"), "--obs", w.path("uniform.obs"), "--obs-mult", "2"}).code == 1);
    CHECK(run({"bench", "--graph", w.path("p3.edges"), "--obs", w.path("uniform.obs"), "--runs", "0"}).code == 1);
    CHECK(run({"partition", "--graph", w.path("p3.edges"), "--k", "0"}).code == 1);
    CHECK(run({"estimate", "--help"}).code == 0);
}

TEST_CASE("data errors exit with 2 and name the file and line")
{
    Workspace w;
    auto r = run({"estimate", "--graph", w.path("bad.edges"), "--obs", w.path("uniform.obs")});
    CHECK(r.code == 2);
    CHECK(r.err.find("bad.edges:2") != std::string::npos);
    r = run({"oracle", "--graph", w.path("missing.edges"), "--obs", w.path("uniform.obs")});
    CHECK(r.code == 2);
    w.write("unknown.obs", "a\nq\n");
    r = run({"oracle", "--graph", w.path("p3.edges"), "--obs", w.path("unknown.obs")});
    CHECK(r.code == 2);
    CHECK(r.err.find("unknown.obs:2") != std::string::npos);
    CHECK(run({"partition", "--graph", w.path("p3.edges"), "--k", "9"}).code == 2);
}

TEST_CASE("estimate is deterministic per seed")
{
    Workspace w;
    const std::vector<std::string> args{"estimate", "--graph", w.path("ring.edges"), "--obs", w.path("ring.obs"),
                                        "--seed", "7"};
    REQUIRE(run({"gen-obs", "--graph", w.path("ring.edges"), "--out", w.path("ring.obs")}).code == 0);
    const auto a = run(args);
    const auto b = run(args);
    CHECK(a.code == 0);
    CHECK(a.out == b.out);
    CHECK(value_of(a.out, "kind") == "estimate");
    CHECK(value_of(a.out, "observations") == "30");

    auto ms = args;
    ms.insert(ms.end(), {"--mode", "multiscale", "--k", "3", "--threads", "2"});
    const auto c = run(ms);
    CHECK(c.code == 0);
    CHECK(c.out == run(ms).out);
    CHECK(value_of(c.out, "partition.clusters") == "3");
    CHECK(value_of(c.out, "upscale_nodes") == "3");
}

TEST_CASE("one-cluster multiscale matches single-scale estimates in distribution")
{
    Workspace w;
    REQUIRE(run({"gen-obs", "--graph", w.path("ring.edges"), "--count", "200", "--seed", "3", "--out",
                 w.path("ring.obs")})
                .code == 0);
    const std::vector<std::string> base{"bench", "--graph", w.path("ring.edges"), "--obs", w.path("ring.obs"),
                                        "--runs", "60", "--seed", "2"};
    const auto single = run(base);
    auto ms = base;
    ms.insert(ms.end(), {"--mode", "multiscale-random", "--k", "1"});
    const auto multi = run(ms);
    REQUIRE(single.code == 0);
    REQUIRE(multi.code == 0);
    CHECK(value_of(single.out, "oracle_barycenter") == value_of(multi.out, "oracle_barycenter"));
    const double a = std::stod(value_of(single.out, "success_ratio"));
    const double b = std::stod(value_of(multi.out, "success_ratio"));
    CHECK(std::abs(a - b) <= 0.2);
}

TEST_CASE("bench writes run records")
{
    Workspace w;
    const auto r = run({"bench", "--graph", w.path("p3.edges"), "--obs", w.path("uniform.obs"), "--runs", "5",
                        "--records", w.path("runs.txt"), "--md-scale", "1000"});
    CHECK(r.code == 0);
    CHECK(value_of(r.out, "runs") == "5");
    CHECK(value_of(r.out, "oracle_barycenter") == "b");
    CHECK(value_of(r.out, "md_scale") == "1000");
    const auto records = w.read("runs.txt");
    CHECK(std::count(records.begin(), records.end(), '\n') == 6);

    const auto plot = run({"export-plot", "--graph", w.path("p3.edges"), "--coords", w.path("p3.coords"), "--obs",
                           w.path("uniform.obs"), "--mark", "b", "--records", w.path("runs.txt")});
    CHECK(plot.code == 0);
    CHECK(plot.out.rfind("node,x,y,weight,marked,returned\na,0,0,", 0) == 0);
    CHECK(plot.out.find("\nb,1,0,0.3333333333333333,1,") != std::string::npos);
}

TEST_CASE("partition and observation generation")
{
    Workspace w;
    auto r = run({"partition", "--graph", w.path("ring.edges"), "--k", "4", "--out", w.path("ring.part")});
    CHECK(r.code == 0);
    CHECK(value_of(r.out, "partition.clusters") == "4");
    const auto part = w.read("ring.part");
    CHECK(std::count(part.begin(), part.end(), '\n') == 30);

    r = run({"gen-obs", "--graph", w.path("p3.edges")});
    CHECK(r.out == "a\nb\nc\n");
    r = run({"gen-obs", "--graph", w.path("p3.edges"), "--count", "10", "--obs-mult", "0.5"});
    CHECK(std::count(r.out.begin(), r.out.end(), '\n') == 5);

    w.write("short.part", "n000 0\n");
    REQUIRE(run({"gen-obs", "--graph", w.path("ring.edges"), "--out", w.path("ring.obs")}).code == 0);
    const auto est = run({"estimate", "--graph", w.path("ring.edges"), "--obs", w.path("ring.obs"), "--mode",
                          "multiscale", "--partition", w.path("short.part")});
    CHECK(est.code == 2);
    CHECK(est.err.find("n001") != std::string::npos);
}

TEST_CASE("saved pipelines accept new observations")
{
    Workspace w;
    REQUIRE(run({"gen-obs", "--graph", w.path("ring.edges"), "--out", w.path("ring.obs")}).code == 0);
    const auto first = run({"estimate", "--graph", w.path("ring.edges"), "--obs", w.path("ring.obs"), "--mode",
                            "multiscale", "--k", "5", "--state", w.path("state.json")});
    REQUIRE(first.code == 0);
    w.write("more.obs", "n003\nn004\n");
    const auto upd = run({"update", "--graph", w.path("ring.edges"), "--state", w.path("state.json"), "--obs",
                          w.path("more.obs"), "--state-out", w.path("state2.json")});
    CHECK(upd.code == 0);
    CHECK(value_of(upd.out, "observations") == "32");
    CHECK(value_of(upd.out, "observations_added") == "2");
    CHECK(fs::exists(w.dir / "state2.json"));

    const auto stale = run({"update", "--graph", w.path("p3.edges"), "--state", w.path("state.json"), "--obs",
                            w.path("uniform.obs")});
    CHECK(stale.code == 2);
    CHECK(stale.err.find("stale") != std::string::npos);
}
