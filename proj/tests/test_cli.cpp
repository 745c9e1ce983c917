#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>

#include "zlab/run_config.hpp"

namespace fs = std::filesystem;

namespace {

struct Run {
    int status = -1;
    std::string out;
};

const fs::path& workdir()
{
    static const fs::path dir = [] {
        fs::path d = fs::path(ZLAB_TEST_TMP) / "cli";
        fs::remove_all(d);
        fs::create_directories(d);
        return d;
    }();
    return dir;
}

std::string slurp(const fs::path& p)
{
    std::ifstream f(p, std::ios::binary);
    std::ostringstream os;
    os << f.rdbuf();
    return os.str();
}

Run cli(const std::string& args, const std::string& env = "")
{
    const fs::path out = workdir() / "stdout.txt";
    const std::string cmd = "cd " + workdir().string() + " && " + env + " " + ZLAB_BIN + " " + args + " > " +
                            out.string() + " 2> " + (workdir() / "stderr.txt").string();
    const int raw = std::system(cmd.c_str());
    Run r;
    r.status = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
    r.out = slurp(out);
    return r;
}

std::string file(const std::string& name) { return slurp(workdir() / name); }

} // namespace

TEST_SUITE("cli")
{
    TEST_CASE("eval")
    {
        const Run z = cli("eval --f zeta --s 0.5,14.134725 --deriv 0");
        REQUIRE(z.status == 0);
        const auto j = zlab::Json::parse(z.out);
        CHECK(std::hypot(j["value"][0].get<double>(), j["value"][1].get<double>()) < 1e-5);

        const Run f = cli("eval --f family --tau 0 --s 2,0");
        REQUIRE(f.status == 0);
        const double expected = (1 + std::sqrt(5.0) / 25) * M_PI * M_PI / 6;
        CHECK(std::abs(zlab::Json::parse(f.out)["value"][0].get<double>() - expected) < 1e-12);

        const Run csv = cli("eval --f lpsi5 --s 1,0 --format csv");
        REQUIRE(csv.status == 0);
        CHECK(csv.out.rfind("re,im,est_abs_error\n0.43040894", 0) == 0);
    }

    TEST_CASE("exit codes")
    {
        CHECK(cli("eval --f zeta --s 1,0").status == 2);
        CHECK(cli("eval --f zeta --s 2,0 --deriv 3").status == 2);
        CHECK(cli("eval --f nope --s 2,0").status == 2);
        CHECK(cli("--threads 0 eval --s 2,0").status == 2);
        CHECK(cli("eval --s two").status == 2);
        CHECK(cli("frobnicate").status == 2);
        CHECK(cli("count --f zeta --rect 0,2,-1,1").status == 2);
        CHECK(cli("--config missing.json eval").status == 2);
        // a τ step too coarse to follow the zeros is a convergence failure
        CHECK(cli("census --H 20 --dtau-min 0.1 --dtau-max 0.1 --dtau-init 0.1").status == 3);
        // every shell of the annulus holds a zero: budget failure
        CHECK(cli("speiser --f zeta --T 15.1173 --C 0.05 --shells 2").status == 4);
        CHECK(cli("--help").status == 0);
    }

    TEST_CASE("count and zeros")
    {
        const Run c = cli("count --f zeta --rect -1,2,1,50");
        REQUIRE(c.status == 0);
        CHECK(c.out == "10\n");
        const Run z = cli("--format csv zeros --f zeta --rect 0,1,10,30");
        REQUIRE(z.status == 0);
        CHECK(std::count(z.out.begin(), z.out.end(), '\n') == 4);
        CHECK(z.out.find(",14.13472514173") != std::string::npos);
    }

    TEST_CASE("environment overrides")
    {
        const Run c = cli("count --f zeta", "ZLAB_RECT=-1,2,1,50");
        REQUIRE(c.status == 0);
        CHECK(c.out == "10\n");
        CHECK(cli("eval --s 2,0", "ZLAB_THREADS=0").status == 2);
        // the flag wins over the variable
        CHECK(cli("count --f zeta --rect -1,2,1,30", "ZLAB_RECT=-1,2,1,50").out == "3\n");
    }

    TEST_CASE("config files")
    {
        zlab::RunConfig c;
        c.command = "count";
        c.rect = zlab::Rect{-1, 2, 1, 50};
        std::ofstream(workdir() / "count.json") << zlab::to_json(c).dump();
        CHECK(cli("--config count.json count").out == "10\n");
        CHECK(cli("--config count.json count --rect -1,2,1,30").out == "3\n");
        std::ofstream(workdir() / "broken.json") << "{\"command\": ";
        CHECK(cli("--config broken.json count").status == 2);
    }

    TEST_CASE("speiser report")
    {
        const Run r = cli("speiser --f zeta --T 100 --C 20 --shells 8 --delta 0.1");
        REQUIRE(r.status == 0);
        const auto j = zlab::Json::parse(r.out);
        CHECK(j["equal"] == true);
        CHECK(j["n_F"] == 0);
        const Run d = cli("--format csv speiser --f zeta --s0 0.5,14.134725 --r 0.3");
        REQUIRE(d.status == 0);
        CHECK(d.out.rfind("T,r,n_F,n_Fprime,equal\n", 0) == 0);
    }

    TEST_CASE("trace")
    {
        const Run r = cli("--out tr.jsonl trace --rho 0.5,1.9519812658311715 --tau-start 0 --tau-end 0.1");
        REQUIRE(r.status == 0);
        CHECK(r.out.rfind("trace: ", 0) == 0);
        const auto j = zlab::Json::parse(file("tr.jsonl"));
        CHECK(j.contains("seed"));
        CHECK(j["samples"].back()[0] == 0.1);
    }

    TEST_CASE("outputs do not depend on the thread count")
    {
        for (int t : {1, 4, 8}) {
            const std::string n = std::to_string(t);
            REQUIRE(cli("--threads " + n + " --out z" + n + ".json zeros --f family --tau 0.3 --rect -2,3,0.5,60").status == 0);
            REQUIRE(cli("--threads " + n + " --out c" + n + ".json census --H 30").status == 0);
        }
        CHECK(file("z1.json") == file("z4.json"));
        CHECK(file("z1.json") == file("z8.json"));
        CHECK(file("c1.json") == file("c4.json"));
        CHECK(file("c1.json") == file("c8.json"));
        CHECK(file("c1.trajectories.jsonl") == file("c8.trajectories.jsonl"));
        CHECK(file("c1.plot.csv") == file("c8.plot.csv"));
    }

    TEST_CASE("interrupted runs resume to identical output")
    {
        REQUIRE(cli("--out full.json census --H 30").status == 0);
        CHECK(cli("--out part.json --checkpoint ck.json --stop-after 5 census --H 30").status == 75);
        CHECK(fs::exists(workdir() / "ck.json"));
        CHECK(!fs::exists(workdir() / "part.json"));
        REQUIRE(cli("--threads 3 --out part.json --checkpoint ck.json --resume ck.json census --H 30").status == 0);
        CHECK(file("full.json") == file("part.json"));
        CHECK(file("full.trajectories.jsonl") == file("part.trajectories.jsonl"));
        CHECK(file("full.plot.csv") == file("part.plot.csv"));

        REQUIRE(cli("--out zfull.json zeros --f zeta --rect -1,2,1,80 --strips 6").status == 0);
        CHECK(cli("--out zpart.json --checkpoint zck.json --stop-after 2 zeros --f zeta --rect -1,2,1,80 --strips 6").status == 75);
        REQUIRE(cli("--out zpart.json --resume zck.json zeros --f zeta --rect -1,2,1,80 --strips 6").status == 0);
        CHECK(file("zfull.json") == file("zpart.json"));

        // a checkpoint from another config is refused
        CHECK(cli("--out x.json --resume zck.json zeros --f zeta --rect -1,2,1,81 --strips 6").status == 2);
    }
}
