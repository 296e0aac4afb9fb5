#pragma once

#include <chrono>
#include <ctime>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include "lfctune/io.hpp"
#include "lfctune/metrics.hpp"
#include "lfctune/objective.hpp"
#include "lfctune/optimizers.hpp"
#include "lfctune/svg.hpp"

// Command implementations behind the CLI front end. Each returns a process
// exit code: 0 ok, 1 usage, 2 validation, 3 divergence.

namespace lfctune {

inline constexpr const char* kToolName = "lfctune";
inline constexpr const char* kToolVersion = "0.1.0";

enum ExitCode : int {
    exit_ok = 0,
    exit_usage = 1,
    exit_validation = 2,
    exit_divergence = 3,
};

namespace detail {

inline std::string utc_now_iso8601() {
    const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

// Manifest goes to disk before any result file. Timestamps live only here so
// every other output is byte-identical across reruns.
inline void write_manifest(const std::string& out_dir, nlohmann::ordered_json manifest,
                           const std::vector<std::string>& outputs) {
    manifest["tool"] = kToolName;
    manifest["version"] = kToolVersion;
    manifest["created_utc"] = utc_now_iso8601();
    manifest["outputs"] = outputs;
    write_file(out_dir + "/manifest.json", manifest.dump(2) + "\n");
}

inline nlohmann::ordered_json metrics_json(const TraceSet& traces, double band) {
    nlohmann::ordered_json areas = nlohmann::ordered_json::array();
    for (std::size_t i = 0; i < traces.delta_f.size(); ++i) {
        const ResponseMetrics m = response_metrics(traces.delta_f[i], traces.times, band);
        nlohmann::ordered_json entry{
            {"area", i + 1},
            {"peak_overshoot_hz", m.peak_overshoot},
            {"peak_undershoot_hz", m.peak_undershoot},
        };
        if (m.settling_time) entry["settling_time_s"] = *m.settling_time;
        else entry["settling_time_s"] = nullptr;
        entry["steady_state_hz"] = m.steady_state_value;
        areas.push_back(entry);
    }
    return nlohmann::ordered_json{
        {"band_hz", band}, {"diverged", traces.diverged}, {"areas", areas}};
}

}  // namespace detail

// ---------------------------------------------------------------------------

struct SimulateArgs {
    std::string config_path; // empty with nominal=true uses built-in nominal
    bool nominal = false;
    std::string decision_path; // empty uses the nominal decision
    int load_area = 1;         // 1-based
    double load_pu = 0.01;
    double load_start = 0.0;
    std::string out_dir = ".";
};

inline int cmd_simulate(const SimulateArgs& args, std::ostream& diag) {
    RunConfig rc;
    try {
        rc = args.nominal ? nominal_run_config() : read_config_text(read_file(args.config_path));
    } catch (const std::exception& e) {
        diag << "error: " << e.what() << "\n";
        return exit_validation;
    }
    const auto errors = validate(rc.system);
    if (!errors.empty()) {
        for (const auto& e : errors) diag << "config error: " << e << "\n";
        return exit_validation;
    }
    if (args.load_area < 1 || args.load_area > static_cast<int>(rc.system.areas.size())) {
        diag << "error: --load-area out of range\n";
        return exit_validation;
    }
    DecisionVector decision;
    try {
        decision = args.decision_path.empty() ? nominal_decision(rc.system)
                                              : read_decision_text(read_file(args.decision_path));
    } catch (const std::exception& e) {
        diag << "error: " << e.what() << "\n";
        return exit_validation;
    }
    if (decision.areas() != rc.system.areas.size()) {
        diag << "error: decision has " << decision.areas() << " areas, config has "
             << rc.system.areas.size() << "\n";
        return exit_validation;
    }

    const Disturbance dist{args.load_area - 1, args.load_pu, args.load_start};
    std::filesystem::create_directories(args.out_dir);

    nlohmann::ordered_json manifest{
        {"command", "simulate"},
        {"scenario_hash", scenario_hash(rc, dist)},
        {"decision_hash", hash_hex(fnv1a(write_decision_text(decision)))},
    };
    detail::write_manifest(args.out_dir, manifest, {"traces.csv", "metrics.json"});

    TraceSet traces;
    try {
        traces = simulate(rc.system, decision, dist, rc.sim);
    } catch (const std::exception& e) {
        diag << "error: " << e.what() << "\n";
        return exit_validation;
    }
    write_file(args.out_dir + "/traces.csv", trace_csv(traces));
    write_file(args.out_dir + "/metrics.json",
               detail::metrics_json(traces, kDefaultSettlingBand).dump(2) + "\n");

    if (traces.diverged) {
        diag << "simulation diverged at t = " << format_double(traces.divergence_time)
             << " s; truncated trace written\n";
        return exit_divergence;
    }
    return exit_ok;
}

// ---------------------------------------------------------------------------

struct TuneArgs {
    std::string config_path;
    bool nominal = false;
    std::string method;           // bfo | pso | gd
    std::string profile = "desk"; // desk | paper
    std::uint64_t seed = 0;
    int load_area = 1;
    double load_pu = 0.01;
    double load_start = 0.0;
    std::string out_dir = ".";
};

// Budget profiles. `desk` also coarsens the objective's integration grid
// (shorter horizon, larger step); transients on this plant die out well
// within 120 s, so the ISE ranking is unaffected while each evaluation gets
// about four times cheaper. `paper` keeps the configured grid and the
// published BFO budget. `config` leaves every budget to the config file.
inline void apply_profile(RunConfig& rc, const std::string& profile) {
    if (profile == "config") {
        return;
    }
    if (profile == "desk") {
        const BfoParams bd = BfoParams::desk();
        rc.bfo.S = bd.S;
        rc.bfo.Nc = bd.Nc;
        rc.bfo.Ns = bd.Ns;
        rc.bfo.Nre = bd.Nre;
        rc.bfo.Ned = bd.Ned;
        rc.pso.swarm_size = PsoParams::desk().swarm_size;
        rc.pso.iterations = PsoParams::desk().iterations;
        rc.gd.iterations = GdParams::desk().iterations;
        rc.sim.dt = 0.02;
        rc.sim.horizon = 120.0;
        rc.sim.record_stride = 5;
    } else if (profile == "paper") {
        const BfoParams bp = BfoParams::paper();
        rc.bfo.S = bp.S;
        rc.bfo.Nc = bp.Nc;
        rc.bfo.Ns = bp.Ns;
        rc.bfo.Nre = bp.Nre;
        rc.bfo.Ned = bp.Ned;
        rc.pso.swarm_size = PsoParams::paper().swarm_size;
        rc.pso.iterations = PsoParams::paper().iterations;
        rc.gd.iterations = GdParams::paper().iterations;
    } else {
        throw std::invalid_argument("unknown profile '" + profile + "' (desk|paper|config)");
    }
}

inline int cmd_tune(const TuneArgs& args, std::ostream& diag) {
    if (args.method != "bfo" && args.method != "pso" && args.method != "gd") {
        diag << "error: unknown method '" << args.method << "' (bfo|pso|gd)\n";
        return exit_usage;
    }
    if (args.profile != "desk" && args.profile != "paper" && args.profile != "config") {
        diag << "error: unknown profile '" << args.profile << "' (desk|paper|config)\n";
        return exit_usage;
    }
    RunConfig rc;
    try {
        rc = args.nominal ? nominal_run_config() : read_config_text(read_file(args.config_path));
        apply_profile(rc, args.profile);
    } catch (const std::exception& e) {
        diag << "error: " << e.what() << "\n";
        return exit_validation;
    }
    const auto errors = validate(rc.system);
    if (!errors.empty()) {
        for (const auto& e : errors) diag << "config error: " << e << "\n";
        return exit_validation;
    }
    if (args.load_area < 1 || args.load_area > static_cast<int>(rc.system.areas.size())) {
        diag << "error: --load-area out of range\n";
        return exit_validation;
    }

    Scenario scenario;
    scenario.config = rc.system;
    scenario.disturbance = Disturbance{args.load_area - 1, args.load_pu, args.load_start};
    scenario.options = rc.sim;

    const Objective objective = [&scenario](const std::vector<double>& x) {
        return evaluate(DecisionVector::unflatten(x), scenario);
    };

    std::filesystem::create_directories(args.out_dir);
    nlohmann::ordered_json params;
    if (args.method == "bfo") params = params_json(rc.bfo);
    else if (args.method == "pso") params = params_json(rc.pso);
    else params = params_json(rc.gd);

    nlohmann::ordered_json manifest{
        {"command", "tune"},
        {"scenario_hash", scenario_hash(rc, scenario.disturbance)},
        {"method", args.method},
        {"profile", args.profile},
        {"seed", args.seed},
        {"params", params},
    };
    detail::write_manifest(args.out_dir, manifest,
                           {"config.cfg", "result.json", "best_decision.cfg", "convergence.csv"});
    write_file(args.out_dir + "/config.cfg", write_config_text(rc));

    OptResult result;
    if (args.method == "bfo") {
        result = bfo_minimize(objective, rc.bounds, rc.bfo, args.seed);
    } else if (args.method == "pso") {
        result = pso_minimize(objective, rc.bounds, rc.pso, args.seed);
    } else {
        // the paper's GD initialization: all gains and system variables zero,
        // clamped into the feasible box
        const std::vector<double> start(rc.bounds.dimension(), 0.0);
        result = gd_minimize(objective, rc.bounds, rc.gd, start);
        result.seed = args.seed;
    }

    write_file(args.out_dir + "/result.json",
               result_json(result, args.method, params).dump(2) + "\n");
    write_file(args.out_dir + "/best_decision.cfg",
               write_decision_text(DecisionVector::unflatten(result.best)));
    std::ostringstream conv;
    conv << "iteration,best_cost\n";
    for (std::size_t i = 0; i < result.history.size(); ++i)
        conv << i << ',' << format_double(result.history[i]) << "\n";
    write_file(args.out_dir + "/convergence.csv", conv.str());

    diag << args.method << " best cost " << format_double(result.best_cost) << " after "
         << result.evaluations << " evaluations\n";
    return exit_ok;
}

// ---------------------------------------------------------------------------

struct CompareArgs {
    std::vector<std::string> result_dirs;
    std::string out_dir = ".";
};

// Re-simulates each tuned decision under a 1% load step in area 1 over a
// 250 s window and emits the three comparison tables plus one overlay plot
// per area.
inline int cmd_compare(const CompareArgs& args, std::ostream& diag) {
    if (args.result_dirs.empty()) {
        diag << "error: no result directories given\n";
        return exit_usage;
    }
    struct Entry {
        std::string method;
        std::string hash;
        DecisionVector decision;
    };
    std::vector<Entry> entries;
    RunConfig rc;
    try {
        for (const auto& dir : args.result_dirs) {
            const auto manifest = nlohmann::json::parse(read_file(dir + "/manifest.json"));
            Entry e;
            e.method = manifest.at("method").get<std::string>();
            e.hash = manifest.at("scenario_hash").get<std::string>();
            e.decision = read_decision_text(read_file(dir + "/best_decision.cfg"));
            entries.push_back(std::move(e));
        }
        rc = read_config_text(read_file(args.result_dirs.front() + "/config.cfg"));
    } catch (const std::exception& e) {
        diag << "error: " << e.what() << "\n";
        return exit_validation;
    }
    for (const auto& e : entries) {
        if (e.hash != entries.front().hash) {
            diag << "error: results come from different scenarios (hash " << e.hash << " vs "
                 << entries.front().hash << ")\n";
            return exit_validation;
        }
    }

    SimOptions opt = rc.sim;
    opt.horizon = 250.0;
    const Disturbance dist{0, 0.01, 0.0};

    std::vector<TraceSet> traces;
    traces.reserve(entries.size());
    for (const auto& e : entries) {
        traces.push_back(simulate(rc.system, e.decision, dist, opt));
        if (traces.back().diverged) {
            diag << "error: tuned decision from method '" << e.method
                 << "' diverged during re-simulation\n";
            return exit_divergence;
        }
    }

    std::vector<LabeledTraces> labeled;
    for (std::size_t i = 0; i < entries.size(); ++i)
        labeled.push_back(LabeledTraces{entries[i].method, &traces[i]});
    const ComparisonReport report = comparison_report(labeled);

    std::filesystem::create_directories(args.out_dir);
    std::vector<std::string> outputs = {"comparison.txt", "comparison.csv"};
    const std::size_t n_areas = rc.system.areas.size();
    for (std::size_t a = 0; a < n_areas; ++a)
        outputs.push_back("delf_area" + std::to_string(a + 1) + ".svg");

    nlohmann::ordered_json manifest{
        {"command", "compare"},
        {"scenario_hash", entries.front().hash},
        {"methods", [&] {
             nlohmann::ordered_json m = nlohmann::ordered_json::array();
             for (const auto& e : entries) m.push_back(e.method);
             return m;
         }()},
    };
    detail::write_manifest(args.out_dir, manifest, outputs);

    write_file(args.out_dir + "/comparison.txt", report.to_text());
    write_file(args.out_dir + "/comparison.csv", report.to_csv());
    for (std::size_t a = 0; a < n_areas; ++a) {
        std::vector<SvgSeries> series;
        for (std::size_t i = 0; i < entries.size(); ++i)
            series.push_back(SvgSeries{entries[i].method, &traces[i].times, &traces[i].delta_f[a]});
        const std::string svg = render_line_chart(
            "Frequency deviation, area " + std::to_string(a + 1) + " (1% load step in area 1)",
            "t (s)", "delta f (Hz)", series);
        write_file(args.out_dir + "/delf_area" + std::to_string(a + 1) + ".svg", svg);
    }
    diag << "compared " << entries.size() << " results across " << n_areas << " areas\n";
    return exit_ok;
}

// ---------------------------------------------------------------------------

struct NominalConfigArgs {
    std::string out_dir = ".";
};

inline int cmd_nominal_config(const NominalConfigArgs& args, std::ostream& diag) {
    std::filesystem::create_directories(args.out_dir);
    const std::string path = args.out_dir + "/nominal.cfg";
    write_file(path, write_config_text(nominal_run_config()));
    diag << "wrote " << path << "\n";
    return exit_ok;
}

}  // namespace lfctune
