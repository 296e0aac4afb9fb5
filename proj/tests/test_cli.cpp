#include <catch2/catch_amalgamated.hpp>

#include <filesystem>
#include <sstream>
#include <unistd.h>

#include "lfctune/commands.hpp"

using namespace lfctune;
namespace fs = std::filesystem;

namespace {

struct TempDir {
    fs::path path;
    explicit TempDir(const std::string& tag) {
        path = fs::temp_directory_path() /
               ("lfctune_test_" + tag + "_" + std::to_string(::getpid()));
        fs::remove_all(path);
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
    std::string sub(const std::string& name) const { return (path / name).string(); }
};

std::string slurp(const std::string& p) { return read_file(p); }

}  // namespace

TEST_CASE("nominal-config writes a loadable configuration", "[cli]") {
    TempDir tmp("nomcfg");
    std::ostringstream diag;
    REQUIRE(cmd_nominal_config({tmp.sub("out")}, diag) == exit_ok);
    const RunConfig rc = read_config_text(slurp(tmp.sub("out") + "/nominal.cfg"));
    CHECK(validate(rc.system).empty());
    CHECK(rc.system.areas.size() == 3);
}

TEST_CASE("simulate writes traces, metrics and a manifest", "[cli]") {
    TempDir tmp("sim");
    SimulateArgs args;
    args.nominal = true;
    args.load_area = 1;
    args.load_pu = 0.01;
    args.out_dir = tmp.sub("run");
    std::ostringstream diag;
    REQUIRE(cmd_simulate(args, diag) == exit_ok);
    CHECK(fs::exists(tmp.sub("run") + "/traces.csv"));
    CHECK(fs::exists(tmp.sub("run") + "/metrics.json"));
    CHECK(fs::exists(tmp.sub("run") + "/manifest.json"));

    const auto metrics = nlohmann::json::parse(slurp(tmp.sub("run") + "/metrics.json"));
    CHECK(metrics.at("areas").size() == 3);
    CHECK_FALSE(metrics.at("diverged").get<bool>());

    const auto manifest = nlohmann::json::parse(slurp(tmp.sub("run") + "/manifest.json"));
    CHECK(manifest.at("command") == "simulate");
    for (const auto& f : manifest.at("outputs"))
        CHECK(fs::exists(tmp.sub("run") + "/" + f.get<std::string>()));
}

TEST_CASE("simulate is byte-reproducible", "[cli]") {
    TempDir tmp("repro");
    auto run = [&](const std::string& dir) {
        SimulateArgs args;
        args.nominal = true;
        args.out_dir = tmp.sub(dir);
        std::ostringstream diag;
        REQUIRE(cmd_simulate(args, diag) == exit_ok);
        return slurp(tmp.sub(dir) + "/traces.csv");
    };
    CHECK(run("a") == run("b"));
}

TEST_CASE("simulate with a zero step reports all-zero metrics", "[cli]") {
    TempDir tmp("zero");
    SimulateArgs args;
    args.nominal = true;
    args.load_pu = 0.0;
    args.out_dir = tmp.sub("run");
    std::ostringstream diag;
    REQUIRE(cmd_simulate(args, diag) == exit_ok);
    const auto metrics = nlohmann::json::parse(slurp(tmp.sub("run") + "/metrics.json"));
    for (const auto& area : metrics.at("areas")) {
        CHECK(area.at("peak_overshoot_hz").get<double>() == 0.0);
        CHECK(area.at("peak_undershoot_hz").get<double>() == 0.0);
        CHECK(area.at("settling_time_s").get<double>() == 0.0);
    }
}

TEST_CASE("simulate rejects a broken configuration with exit code 2", "[cli]") {
    TempDir tmp("badcfg");
    RunConfig rc = nominal_run_config();
    std::get<ThermalParams>(rc.system.areas[0].mover).Tg = -1.0;
    write_file(tmp.sub("bad.cfg"), write_config_text(rc));
    SimulateArgs args;
    args.config_path = tmp.sub("bad.cfg");
    args.out_dir = tmp.sub("run");
    std::ostringstream diag;
    CHECK(cmd_simulate(args, diag) == exit_validation);
    CHECK(diag.str().find("Tg") != std::string::npos);
}

TEST_CASE("tune rejects an unknown method with a usage error", "[cli]") {
    TuneArgs args;
    args.nominal = true;
    args.method = "annealing";
    std::ostringstream diag;
    CHECK(cmd_tune(args, diag) == exit_usage);
}

TEST_CASE("tune gd starts from the clamped zero vector", "[cli][slow]") {
    TempDir tmp("gd");
    RunConfig rc = nominal_run_config();
    rc.gd.iterations = 2;
    rc.sim.dt = 0.02;
    rc.sim.horizon = 40.0;
    rc.sim.record_stride = 5;
    write_file(tmp.sub("c.cfg"), write_config_text(rc));
    TuneArgs args;
    args.config_path = tmp.sub("c.cfg");
    args.method = "gd";
    args.profile = "config";
    args.out_dir = tmp.sub("run");
    std::ostringstream diag;
    REQUIRE(cmd_tune(args, diag) == exit_ok);
    const auto result = nlohmann::json::parse(slurp(tmp.sub("run") + "/result.json"));
    // history[0] is the cost at the start point: clamp(0) per dimension
    Scenario scenario{rc.system, Disturbance{0, 0.01, 0.0}, rc.sim};
    DecisionVector start = DecisionVector::unflatten(rc.bounds.clamp(std::vector<double>(12, 0.0)));
    const double start_cost = evaluate(start, scenario);
    CHECK_THAT(result.at("history")[0].get<double>(),
               Catch::Matchers::WithinRel(start_cost, 1e-12));
}

TEST_CASE("tune bfo produces a consistent result directory", "[cli][slow]") {
    TempDir tmp("bfo");
    // a cut-down budget keeps this test quick; the full desk budget is
    // exercised by the acceptance suite
    RunConfig rc = nominal_run_config();
    rc.bfo.S = 8;
    rc.bfo.Nc = 5;
    rc.bfo.Nre = 2;
    rc.bfo.Ned = 1;
    rc.sim.dt = 0.02;
    rc.sim.horizon = 40.0;
    rc.sim.record_stride = 5;
    write_file(tmp.sub("small.cfg"), write_config_text(rc));
    TuneArgs args;
    args.config_path = tmp.sub("small.cfg");
    args.method = "bfo";
    args.profile = "config";
    args.seed = 0;
    args.out_dir = tmp.sub("run");
    std::ostringstream diag;
    REQUIRE(cmd_tune(args, diag) == exit_ok);

    const auto result = nlohmann::json::parse(slurp(tmp.sub("run") + "/result.json"));
    CHECK(result.at("method") == "bfo");
    CHECK(result.at("best").size() == 12);
    const auto history = result.at("history").get<std::vector<double>>();
    for (std::size_t i = 1; i < history.size(); ++i) CHECK(history[i] <= history[i - 1]);
    CHECK(result.at("best_cost").get<double>() == history.back());

    const DecisionVector best = read_decision_text(slurp(tmp.sub("run") + "/best_decision.cfg"));
    CHECK(rc.bounds.contains(best.flatten()));

    const std::string conv = slurp(tmp.sub("run") + "/convergence.csv");
    CHECK(conv.rfind("iteration,best_cost\n", 0) == 0);
}

TEST_CASE("profiles pin the budgets; unknown profiles are usage errors", "[cli]") {
    RunConfig rc = nominal_run_config();
    rc.bfo.S = 4; // overridden by desk below
    apply_profile(rc, "desk");
    CHECK(rc.bfo.S == 20);
    CHECK(rc.bfo.Nc == 30);
    CHECK(rc.sim.horizon == 120.0);
    apply_profile(rc, "paper");
    CHECK(rc.bfo.S == 120);
    CHECK(rc.bfo.Nc == 120);
    CHECK(rc.bfo.Ns == 30);
    CHECK(rc.bfo.Nre == 30);
    CHECK(rc.bfo.Ned == 5);
    RunConfig untouched = nominal_run_config();
    untouched.pso.iterations = 3;
    apply_profile(untouched, "config");
    CHECK(untouched.pso.iterations == 3);

    TuneArgs bad;
    bad.nominal = true;
    bad.method = "pso";
    bad.profile = "weekend";
    std::ostringstream diag;
    CHECK(cmd_tune(bad, diag) == exit_usage);
}

TEST_CASE("compare validates scenario hashes and writes tables and plots", "[cli][slow]") {
    TempDir tmp("cmp");
    RunConfig rc = nominal_run_config();
    rc.bfo.S = 4;
    rc.bfo.Nc = 4;
    rc.bfo.Ns = 2;
    rc.bfo.Nre = 2;
    rc.bfo.Ned = 1;
    rc.pso.swarm_size = 8;
    rc.pso.iterations = 10;
    rc.gd.iterations = 5;
    // 120 s tuning horizon: anything that survives it also survives the
    // 250 s re-simulation inside compare (gd's zero start does not, so the
    // comparison here uses the population-based methods)
    rc.sim.dt = 0.02;
    rc.sim.horizon = 120.0;
    rc.sim.record_stride = 5;
    write_file(tmp.sub("c.cfg"), write_config_text(rc));

    std::ostringstream diag;
    auto tune_one = [&](const std::string& method, const std::string& dir, std::uint64_t seed) {
        TuneArgs args;
        args.config_path = tmp.sub("c.cfg");
        args.method = method;
        args.profile = "config";
        args.seed = seed;
        args.out_dir = tmp.sub(dir);
        REQUIRE(cmd_tune(args, diag) == exit_ok);
    };
    tune_one("bfo", "rb", 0);
    tune_one("pso", "rp", 0);
    tune_one("bfo", "rg", 3);

    CompareArgs cargs;
    cargs.result_dirs = {tmp.sub("rb"), tmp.sub("rp"), tmp.sub("rg")};
    cargs.out_dir = tmp.sub("out");
    REQUIRE(cmd_compare(cargs, diag) == exit_ok);
    CHECK(fs::exists(tmp.sub("out") + "/comparison.txt"));
    CHECK(fs::exists(tmp.sub("out") + "/comparison.csv"));
    for (int a = 1; a <= 3; ++a)
        CHECK(fs::exists(tmp.sub("out") + "/delf_area" + std::to_string(a) + ".svg"));

    const std::string text = slurp(tmp.sub("out") + "/comparison.txt");
    CHECK(text.find("bfo") != std::string::npos);
    CHECK(text.find("pso") != std::string::npos);

    // each svg is well-formed enough to carry three polyline series
    for (int a = 1; a <= 3; ++a) {
        const std::string svg = slurp(tmp.sub("out") + "/delf_area" + std::to_string(a) + ".svg");
        CHECK(svg.rfind("<?xml", 0) == 0);
        std::size_t polylines = 0, pos = 0;
        while ((pos = svg.find("<polyline", pos)) != std::string::npos) {
            ++polylines;
            pos += 9;
        }
        CHECK(polylines == 3);
        CHECK(svg.find("</svg>") != std::string::npos);
        CHECK(svg.find("delta f (Hz)") != std::string::npos);
        CHECK(svg.find("t (s)") != std::string::npos);
    }

    // a result tuned under a different scenario must be rejected
    RunConfig other = rc;
    other.sim.horizon = 110.0;
    write_file(tmp.sub("c2.cfg"), write_config_text(other));
    TuneArgs alt;
    alt.config_path = tmp.sub("c2.cfg");
    alt.method = "pso";
    alt.profile = "config";
    alt.out_dir = tmp.sub("ralien");
    REQUIRE(cmd_tune(alt, diag) == exit_ok);
    CompareArgs bad;
    bad.result_dirs = {tmp.sub("rb"), tmp.sub("rp"), tmp.sub("ralien")};
    bad.out_dir = tmp.sub("out2");
    CHECK(cmd_compare(bad, diag) == exit_validation);

    // comparing one result against itself gives identical rows
    CompareArgs same;
    same.result_dirs = {tmp.sub("rb"), tmp.sub("rb"), tmp.sub("rb")};
    same.out_dir = tmp.sub("out3");
    REQUIRE(cmd_compare(same, diag) == exit_ok);
    const std::string csv = slurp(tmp.sub("out3") + "/comparison.csv");
    CHECK(csv.find("peak_undershoot_hz,bfo,1,") != std::string::npos);
}

TEST_CASE("commands do not mutate their input files", "[cli][slow]") {
    TempDir tmp("immut");
    RunConfig rc = nominal_run_config();
    rc.gd.iterations = 3;
    rc.sim.dt = 0.02;
    rc.sim.horizon = 40.0;
    rc.sim.record_stride = 5;
    write_file(tmp.sub("c.cfg"), write_config_text(rc));
    const std::string before = slurp(tmp.sub("c.cfg"));
    TuneArgs args;
    args.config_path = tmp.sub("c.cfg");
    args.method = "gd";
    args.profile = "config";
    args.out_dir = tmp.sub("run");
    std::ostringstream diag;
    REQUIRE(cmd_tune(args, diag) == exit_ok);
    CHECK(slurp(tmp.sub("c.cfg")) == before);
}
