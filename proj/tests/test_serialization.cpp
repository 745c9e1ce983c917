#include <doctest.h>

#include <random>

#include "zlab/commands.hpp"

using namespace zlab;

namespace {

RunConfig random_config(std::mt19937_64& rng)
{
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::uniform_int_distribution<int> pick(0, 5);
    auto any = [&] { return std::ldexp(u(rng) - 0.5, static_cast<int>(u(rng) * 40) - 20); };
    const char* commands[] = {"eval", "zeros", "count", "speiser", "trace", "census"};
    const char* functions[] = {"zeta", "lpsi5", "factor_zeta", "family"};
    RunConfig c;
    c.command = commands[pick(rng)];
    c.function = functions[pick(rng) % 4];
    c.tau = u(rng);
    c.tolerances = {{"tol", u(rng) * 1e-9 + 1e-15}};
    if (u(rng) < 0.5) c.tolerances["series"] = u(rng) * 1e-6 + 1e-16;
    c.s = {any(), any()};
    c.deriv = pick(rng) % 3;
    if (u(rng) < 0.5) c.rect = Rect{any(), any(), any(), any()};
    c.which = u(rng) < 0.5 ? "F" : "Fprime";
    c.strips = 1 + pick(rng);
    c.T = 100 * u(rng);
    c.C = any();
    c.shells = pick(rng);
    c.delta = u(rng);
    if (u(rng) < 0.5) c.s0 = Complex(any(), any());
    c.r = u(rng);
    c.rho = {any(), any()};
    c.tau_start = u(rng);
    c.tau_end = u(rng);
    c.H = 500 * u(rng);
    c.step.dtau_min = any();
    c.step.dtau_max = any();
    c.step.tol = any();
    c.step.max_steps = pick(rng) * 1000 + 1;
    for (int k = pick(rng); k > 0; --k) c.step.checkpoints.push_back(u(rng));
    c.format = u(rng) < 0.5 ? "json" : "csv";
    c.out = u(rng) < 0.5 ? "" : "out/file" + std::to_string(pick(rng)) + ".json";
    c.checkpoint = u(rng) < 0.5 ? "" : "ck.json";
    c.threads = 1 + pick(rng);
    return c;
}

} // namespace

TEST_SUITE("serialization")
{
    TEST_CASE("doubles round-trip through text")
    {
        std::mt19937_64 rng(41);
        std::uniform_real_distribution<double> u(-1.0, 1.0);
        for (int i = 0; i < 1000; ++i) {
            const double x = std::ldexp(u(rng), static_cast<int>(u(rng) * 300));
            CHECK(std::stod(format_double(x)) == x);
        }
        CHECK(format_double(0.1) == "0.1");
    }

    TEST_CASE("config round-trip for 100 fuzzed configs")
    {
        std::mt19937_64 rng(42);
        for (int i = 0; i < 100; ++i) {
            const RunConfig c = random_config(rng);
            const std::string text = to_json(c).dump();
            const RunConfig back = run_config_from_json(Json::parse(text));
            CHECK(back == c);
            CHECK(to_json(back).dump() == text);
            CHECK(config_hash(back) == config_hash(c));
        }
    }

    TEST_CASE("config hash ignores threads and output paths")
    {
        RunConfig a;
        RunConfig b = a;
        b.threads = 8;
        b.out = "x.json";
        b.checkpoint = "y.json";
        CHECK(config_hash(a) == config_hash(b));
        b.H = 99;
        CHECK(config_hash(a) != config_hash(b));
    }

    TEST_CASE("invalid configs are rejected")
    {
        Json j = to_json(RunConfig{});
        j.erase("threads");
        CHECK_THROWS_AS(run_config_from_json(j), Error);
        Json k = to_json(RunConfig{});
        k["threads"] = 0;
        CHECK_THROWS_AS(run_config_from_json(k), Error);
        Json m = to_json(RunConfig{});
        m["function"] = "eta";
        CHECK_THROWS_AS(run_config_from_json(m), Error);
        Json n = to_json(RunConfig{});
        n["tau"] = "half";
        CHECK_THROWS_AS(run_config_from_json(n), Error);
    }

    TEST_CASE("records round-trip")
    {
        ZeroRecord z{Complex(0.5, 14.134725141734693), 2, 3.5e-15, ZeroMethod::NewtonMultiplicity};
        CHECK(zero_record_from_json(to_json(z)) == z);
        const std::vector<ZeroRecord> zs{z, ZeroRecord{}};
        CHECK(zero_records_from_json(to_json(zs)) == zs);

        Trajectory tr;
        tr.target = Which::F;
        tr.samples = {{0.0, Complex(0.5, 60.1)}, {0.03, Complex(0.4999, 60.7)}};
        tr.status = TrajectoryStatus::LeavesAt;
        tr.tau_star = 0.0294389676;
        tr.rho_star = Complex(0.5, 60.71);
        tr.events = {DoubleZeroEvent{0.0294389676, Complex(0.5, 60.71), Complex(1.5, -2.0), DoubleZeroEvent::Kind::Leave}};
        CHECK(trajectory_from_json(to_json(tr)) == tr);
        Trajectory bad;
        bad.status = TrajectoryStatus::Incomplete;
        bad.reason = "step underflow";
        bad.absorbed_by_pole = true;
        CHECK(trajectory_from_json(to_json(bad)) == bad);

        for (const FunctionSpec& s : {FunctionSpec::riemann_zeta(), FunctionSpec::family(0.25)})
            CHECK(function_spec_from_json(to_json(s)) == s);

        StepControl sc;
        sc.checkpoints = {0.1, 0.2};
        CHECK(step_control_from_json(to_json(sc)) == sc);
    }

    TEST_CASE("checkpoints")
    {
        Checkpoint c;
        c.run_id = "zeros-1";
        c.config_hash = 0xfedcba9876543210ULL;
        c.units[3] = Json::array({1, 2});
        c.units[0] = Json::object();
        CHECK(checkpoint_from_json(to_json(c)) == c);
        CHECK(to_json(c)["config_hash"] == "fedcba9876543210");
    }

    TEST_CASE("csv layouts")
    {
        const std::string csv = zeros_csv({ZeroRecord{Complex(0.5, 14.1), 1, 1e-16, ZeroMethod::Newton}});
        CHECK(csv.rfind("beta,gamma,multiplicity,residual,method\n", 0) == 0);
        CHECK(csv.find("0.5,14.1,1,") != std::string::npos);
        CHECK(speiser_csv_header() == "T,r,n_F,n_Fprime,equal\n");
    }
}
