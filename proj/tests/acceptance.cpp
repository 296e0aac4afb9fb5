// Acceptance suite: one line per criterion, nonzero exit when any fails.
// Covers the steady-state oracle, zero steady-state error, linearity and
// integrator order, the optimizer benchmark, BFO structure, the qualitative
// method ordering, and byte-level reproducibility of tuning runs.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <sstream>
#include <string>
#include <unistd.h>
#include <vector>

#include "lfctune/commands.hpp"
#include "lfctune/metrics.hpp"
#include "lfctune/objective.hpp"
#include "lfctune/optimizers.hpp"

using namespace lfctune;
namespace fs = std::filesystem;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

double median5(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    return v[v.size() / 2];
}

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return buf;
}

SystemConfig isolated_thermal_no_grc() {
    SystemConfig cfg = nominal_system();
    cfg.areas = {cfg.areas[0]};
    cfg.ties.clear();
    std::get<ThermalParams>(cfg.areas[0].mover).grc_enabled = false;
    return cfg;
}

// ---------------------------------------------------------------------- 1
Outcome steady_state_oracle() {
    const SystemConfig cfg = isolated_thermal_no_grc();
    DecisionVector d;
    d.kp = {0.0};
    d.ki = {0.0};
    d.b = {0.425};
    d.r = {2.4};
    const double dp = 0.01;
    SimOptions opt;
    opt.horizon = 100.0;
    const TraceSet t = simulate(cfg, d, Disturbance{0, dp, 0.0}, opt);
    if (t.diverged) return {false, "diverged"};
    const double oracle = -dp / (cfg.areas[0].plant.D + 1.0 / d.r[0]); // final value theorem
    const double got = t.delta_f[0].back();
    const double err = std::abs(got - oracle);
    return {err < 1e-4, "delta_f(100s) = " + fmt(got) + " Hz, oracle " + fmt(oracle) +
                            ", |err| = " + fmt(err)};
}

// ---------------------------------------------------------------------- 2
Outcome zero_steady_state_error() {
    const DecisionVector d = nominal_decision(); // all ki = 0.2 >= 0.05, within bounds
    SimOptions opt;
    opt.horizon = 250.0;
    opt.record_stride = 10;
    const TraceSet t = simulate(nominal_system(), d, Disturbance{0, 0.01, 0.0}, opt);
    if (t.diverged) return {false, "diverged"};
    double worst = 0.0;
    for (const auto& s : t.delta_f) worst = std::max(worst, std::abs(s.back()));
    return {worst < 1e-4, "max |delta_f_i(250s)| = " + fmt(worst) + " Hz"};
}

// ---------------------------------------------------------------------- 3
Outcome linearity_and_order() {
    SystemConfig cfg = nominal_system();
    for (Area& a : cfg.areas)
        if (auto* t = std::get_if<ThermalParams>(&a.mover)) t->grc_enabled = false;
    const DecisionVector d = nominal_decision();

    SimOptions opt;
    opt.horizon = 40.0;
    const TraceSet one = simulate(cfg, d, Disturbance{0, 0.01, 0.0}, opt);
    const TraceSet two = simulate(cfg, d, Disturbance{0, 0.02, 0.0}, opt);
    double rel = 0.0;
    for (std::size_t i = 0; i < one.delta_f.size(); ++i)
        for (std::size_t k = 0; k < one.delta_f[i].size(); ++k) {
            const double want = 2.0 * one.delta_f[i][k];
            const double err = std::abs(two.delta_f[i][k] - want);
            if (want != 0.0) rel = std::max(rel, err / std::max(1e-12, std::abs(want)));
        }
    if (rel > 1e-9) return {false, "linearity violated, rel err " + fmt(rel)};

    // peak of |delta_f1| sampled on a common 0.08 s grid for three dt
    auto peak = [&](double dt, int stride) {
        SimOptions o;
        o.dt = dt;
        o.horizon = 30.0;
        o.record_stride = stride;
        const TraceSet t = simulate(cfg, d, Disturbance{0, 0.01, 0.0}, o);
        double m = 0.0;
        for (double v : t.delta_f[0]) m = std::max(m, std::abs(v));
        return m;
    };
    const double m1 = peak(0.04, 2), m2 = peak(0.02, 4), m3 = peak(0.01, 8);
    const double c1 = std::abs(m1 - m2), c2 = std::abs(m2 - m3);
    const bool ok = c2 > 0.0 && c1 / c2 >= 8.0;
    return {ok, "linearity rel err " + fmt(rel) + "; peak changes " + fmt(c1) + " -> " + fmt(c2) +
                    " (ratio " + fmt(c2 > 0 ? c1 / c2 : 0.0) + ")"};
}

// ---------------------------------------------------------------------- 4
Outcome optimizer_benchmark() {
    Bounds bounds;
    bounds.lower.assign(12, -5.0);
    bounds.upper.assign(12, 5.0);
    const Objective sphere = [](const std::vector<double>& x) {
        double s = 0;
        for (double v : x) s += v * v;
        return s;
    };
    std::vector<double> bfo_costs, pso_costs;
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
        bfo_costs.push_back(bfo_minimize(sphere, bounds, BfoParams::desk(), seed).best_cost);
        pso_costs.push_back(pso_minimize(sphere, bounds, PsoParams::desk(), seed).best_cost);
    }
    const double gd_cost =
        gd_minimize(sphere, bounds, GdParams::desk(), std::vector<double>(12, -5.0)).best_cost;
    const double bfo_med = median5(bfo_costs), pso_med = median5(pso_costs);
    const bool ok = bfo_med < 1e-2 && pso_med < 1e-2 && gd_cost < 1e-2;
    return {ok, "median sphere cost: bfo " + fmt(bfo_med) + ", pso " + fmt(pso_med) +
                    ", gd (corner start) " + fmt(gd_cost)};
}

// ---------------------------------------------------------------------- 5
Outcome bfo_structural() {
    std::ostringstream why;
    bool ok = true;

    Bounds bounds;
    bounds.lower.assign(3, -2.0);
    bounds.upper.assign(3, 2.0);
    const Objective sphere = [](const std::vector<double>& x) {
        double s = 0;
        for (double v : x) s += v * v;
        return s;
    };
    BfoParams params;
    params.S = 8;
    Rng rng(5);
    std::vector<std::vector<double>> pop;
    std::vector<double> costs;
    for (int i = 0; i < params.S; ++i) {
        pop.push_back({rng.uniform(-2.0, 2.0), rng.uniform(-2.0, 2.0), rng.uniform(-2.0, 2.0)});
        costs.push_back(sphere(pop.back()));
    }
    chemotaxis_sweep(pop, costs, sphere, bounds, params, params.step_scale, rng);
    if (pop.size() != 8) {
        ok = false;
        why << "chemotaxis changed population size; ";
    }
    std::vector<double> health(8, 0.0);
    for (int i = 0; i < 8; ++i) health[i] = costs[i];
    reproduce(pop, health, costs);
    if (pop.size() != 8) {
        ok = false;
        why << "reproduction changed population size; ";
    }
    eliminate_disperse(pop, params, bounds, rng);
    if (pop.size() != 8) {
        ok = false;
        why << "dispersal changed population size; ";
    }

    BfoParams small;
    small.S = 10;
    small.Nc = 10;
    small.Nre = 2;
    small.Ned = 2;
    const OptResult run = bfo_minimize(sphere, bounds, small, 1);
    for (std::size_t i = 1; i < run.history.size(); ++i)
        if (run.history[i] > run.history[i - 1]) {
            ok = false;
            why << "history increased at " << i << "; ";
            break;
        }

    BfoParams sw;
    sw.d_attract = 0.1;
    sw.h_repellent = 0.1;
    const std::vector<double> theta{0.7, -0.3};
    const double at_self = swarming_cost(theta, {theta}, sw);
    if (std::abs(at_self) > 1e-6) {
        ok = false;
        why << "coincidence value " << at_self << "; ";
    }
    sw.w_attract = 0.2;
    sw.w_repellent = 10.0;
    const std::vector<double> origin{0.0};
    const double two = swarming_cost(origin, {{1.0}, {-1.0}}, sw);
    const double closed_form = 2.0 * (-0.1 * std::exp(-0.2) + 0.1 * std::exp(-10.0));
    if (std::abs(two - closed_form) > 1e-6 || std::abs(two - (-0.163737)) > 1e-6) {
        ok = false;
        why << "two-member value " << two << " vs " << closed_form << "; ";
    }
    if (ok) why << "population constant, history non-increasing, swarming spot checks within 1e-6";
    return {ok, why.str()};
}

// ---------------------------------------------------------------------- 6
Outcome qualitative_ordering() {
    RunConfig rc = nominal_run_config();
    apply_profile(rc, "desk");
    Scenario scenario;
    scenario.config = rc.system;
    scenario.disturbance = Disturbance{0, 0.01, 0.0};
    scenario.options = rc.sim;
    const Objective objective = [&scenario](const std::vector<double>& x) {
        return evaluate(DecisionVector::unflatten(x), scenario);
    };

    SimOptions report;
    report.dt = 0.01;
    report.horizon = 250.0;
    report.record_stride = 10;
    auto peaks = [&](const std::vector<double>& best) {
        const TraceSet t = simulate(rc.system, DecisionVector::unflatten(best),
                                    Disturbance{0, 0.01, 0.0}, report);
        return std::pair<double, double>{peak_undershoot(t.delta_f[0]),
                                         peak_overshoot(t.delta_f[0])};
    };

    std::vector<double> bfo_us, bfo_os, pso_us, pso_os;
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
        const OptResult rb = bfo_minimize(objective, rc.bounds, rc.bfo, seed);
        const auto [ub, ob] = peaks(rb.best);
        bfo_us.push_back(ub);
        bfo_os.push_back(ob);
        const OptResult rp = pso_minimize(objective, rc.bounds, rc.pso, seed);
        const auto [up, op] = peaks(rp.best);
        pso_us.push_back(up);
        pso_os.push_back(op);
    }
    // GD is deterministic: one run stands for all seeds
    const OptResult rg =
        gd_minimize(objective, rc.bounds, rc.gd, std::vector<double>(rc.bounds.dimension(), 0.0));
    const auto [ug, og] = peaks(rg.best);

    const double mu_b = median5(bfo_us), mo_b = median5(bfo_os);
    const double mu_p = median5(pso_us), mo_p = median5(pso_os);
    const bool ok = mu_b <= mu_p && mu_p <= ug && mo_b <= mo_p && mo_p <= og;
    return {ok, "median undershoot Hz: bfo " + fmt(mu_b) + " <= pso " + fmt(mu_p) + " <= gd " +
                    fmt(ug) + "; overshoot Hz: bfo " + fmt(mo_b) + " <= pso " + fmt(mo_p) +
                    " <= gd " + fmt(og)};
}

// ---------------------------------------------------------------------- 7
Outcome tuning_determinism() {
    const fs::path base =
        fs::temp_directory_path() / ("lfctune_acceptance_" + std::to_string(::getpid()));
    fs::remove_all(base);
    fs::create_directories(base);
    auto run = [&](const std::string& sub) {
        TuneArgs args;
        args.nominal = true;
        args.method = "bfo";
        args.profile = "desk";
        args.seed = 0;
        args.out_dir = (base / sub).string();
        std::ostringstream diag;
        return cmd_tune(args, diag);
    };
    if (run("a") != exit_ok || run("b") != exit_ok) {
        fs::remove_all(base);
        return {false, "tune run failed"};
    }
    const bool result_same =
        read_file((base / "a/result.json").string()) == read_file((base / "b/result.json").string());
    const bool conv_same = read_file((base / "a/convergence.csv").string()) ==
                           read_file((base / "b/convergence.csv").string());
    fs::remove_all(base);
    return {result_same && conv_same,
            std::string("result.json ") + (result_same ? "identical" : "DIFFERS") +
                ", convergence.csv " + (conv_same ? "identical" : "DIFFERS")};
}

}  // namespace

int main() {
    struct Entry {
        int id;
        const char* name;
        Outcome (*fn)();
        double budget_s;
    };
    const Entry entries[] = {
        {1, "steady-state oracle (isolated droop-only area)", steady_state_oracle, 1.0},
        {2, "zero steady-state error with integral action", zero_steady_state_error, 5.0},
        {3, "linearity and fourth-order dt behaviour", linearity_and_order, 60.0},
        {4, "optimizer benchmark on the 12-D sphere", optimizer_benchmark, 30.0},
        {5, "BFO structural suite", bfo_structural, 60.0},
        {6, "qualitative method ordering (undershoot/overshoot)", qualitative_ordering, 900.0},
        {7, "byte-identical repeated tuning", tuning_determinism, 900.0},
    };
    int failures = 0;
    for (const Entry& e : entries) {
        const auto start = std::chrono::steady_clock::now();
        Outcome out;
        try {
            out = e.fn();
        } catch (const std::exception& ex) {
            out = {false, std::string("exception: ") + ex.what()};
        }
        const double secs =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        const bool in_budget = secs < e.budget_s;
        const bool pass = out.pass && in_budget;
        if (!pass) ++failures;
        std::printf("[%s] %d. %s (%.2f s%s): %s\n", pass ? "PASS" : "FAIL", e.id, e.name, secs,
                    in_budget ? "" : ", OVER BUDGET", out.detail.c_str());
        std::fflush(stdout);
    }
    if (failures == 0) std::printf("all %zu criteria passed\n", std::size(entries));
    else std::printf("%d criteria FAILED\n", failures);
    return failures;
}
