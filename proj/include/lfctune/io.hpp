#pragma once

#include <charconv>
#include <cstdint>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <system_error>
#include <utility>
#include <vector>

#include <json.hpp>

#include "lfctune/model.hpp"
#include "lfctune/objective.hpp"
#include "lfctune/optimizers.hpp"
#include "lfctune/simulator.hpp"

// Plain-text config format (sectioned key/value), decision files, trace CSV,
// and the JSON result shapes. All emitters are deterministic: numbers are
// written with shortest round-trip formatting.

namespace lfctune {

// shortest decimal that parses back to exactly the same double
inline std::string format_double(double v) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

inline double parse_double(const std::string& s, const std::string& what) {
    try {
        std::size_t used = 0;
        const double v = std::stod(s, &used);
        while (used < s.size() && (s[used] == ' ' || s[used] == '\t')) ++used;
        if (used != s.size()) throw std::invalid_argument(what);
        return v;
    } catch (const std::exception&) {
        throw std::invalid_argument("invalid number for " + what + ": '" + s + "'");
    }
}

inline long parse_long(const std::string& s, const std::string& what) {
    try {
        std::size_t used = 0;
        const long v = std::stol(s, &used);
        if (used != s.size()) throw std::invalid_argument(what);
        return v;
    } catch (const std::exception&) {
        throw std::invalid_argument("invalid integer for " + what + ": '" + s + "'");
    }
}

inline bool parse_bool(const std::string& s, const std::string& what) {
    if (s == "true" || s == "1" || s == "on") return true;
    if (s == "false" || s == "0" || s == "off") return false;
    throw std::invalid_argument("invalid boolean for " + what + ": '" + s + "'");
}

// ---------------------------------------------------------------------------
// sectioned key/value text

struct ConfigText {
    // section -> ordered (key, value) pairs
    std::vector<std::pair<std::string, std::vector<std::pair<std::string, std::string>>>> sections;

    std::vector<std::pair<std::string, std::string>>* find(const std::string& name) {
        for (auto& s : sections)
            if (s.first == name) return &s.second;
        return nullptr;
    }
    const std::vector<std::pair<std::string, std::string>>* find(const std::string& name) const {
        for (const auto& s : sections)
            if (s.first == name) return &s.second;
        return nullptr;
    }
};

inline std::string trim(const std::string& s) {
    std::size_t a = s.find_first_not_of(" \t\r");
    std::size_t b = s.find_last_not_of(" \t\r");
    if (a == std::string::npos) return "";
    return s.substr(a, b - a + 1);
}

inline ConfigText parse_config_text(const std::string& text) {
    ConfigText cfg;
    std::istringstream in(text);
    std::string line;
    std::string section;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const std::string t = trim(line);
        if (t.empty() || t[0] == '#') continue;
        if (t.front() == '[') {
            if (t.back() != ']')
                throw std::invalid_argument("config line " + std::to_string(line_no) +
                                            ": malformed section header");
            section = trim(t.substr(1, t.size() - 2));
            cfg.sections.emplace_back(section, std::vector<std::pair<std::string, std::string>>{});
            continue;
        }
        const std::size_t eq = t.find('=');
        if (eq == std::string::npos || section.empty())
            throw std::invalid_argument("config line " + std::to_string(line_no) +
                                        ": expected 'key = value' inside a section");
        cfg.sections.back().second.emplace_back(trim(t.substr(0, eq)), trim(t.substr(eq + 1)));
    }
    return cfg;
}

// ---------------------------------------------------------------------------
// system / run configuration

struct RunConfig {
    SystemConfig system;
    Bounds bounds;
    SimOptions sim;
    BfoParams bfo;
    PsoParams pso;
    GdParams gd;
};

inline RunConfig nominal_run_config() {
    RunConfig rc;
    rc.system = nominal_system();
    rc.bounds = default_bounds(rc.system.areas.size());
    rc.sim.dt = 0.01;
    rc.sim.horizon = 250.0;
    rc.sim.record_stride = 10;
    return rc;
}

inline std::string write_config_text(const RunConfig& rc) {
    std::ostringstream out;
    out << "# three-area load-frequency-control configuration\n";
    out << "[system]\n";
    out << "areas = " << rc.system.areas.size() << "\n\n";
    for (std::size_t i = 0; i < rc.system.areas.size(); ++i) {
        const Area& a = rc.system.areas[i];
        out << "[area." << (i + 1) << "]\n";
        if (is_thermal(a)) out << "type = thermal\n";
        else if (is_hydro(a)) out << "type = hydro\n";
        else out << "type = wind\n";
        out << "f_nom = " << format_double(a.plant.f_nom) << "\n";
        out << "rating = " << format_double(a.plant.rating) << "\n";
        out << "H = " << format_double(a.plant.H) << "\n";
        out << "D = " << format_double(a.plant.D) << "\n";
        out << "Kp = " << format_double(a.plant.Kp) << "\n";
        out << "Tp = " << format_double(a.plant.Tp) << "\n";
        if (const auto* t = std::get_if<ThermalParams>(&a.mover)) {
            out << "Tg = " << format_double(t->Tg) << "\n";
            out << "Tt = " << format_double(t->Tt) << "\n";
            out << "Kr = " << format_double(t->Kr) << "\n";
            out << "Tr = " << format_double(t->Tr) << "\n";
            out << "grc = " << format_double(t->grc) << "\n";
            out << "grc_enabled = " << (t->grc_enabled ? "true" : "false") << "\n";
        } else if (const auto* h = std::get_if<HydroParams>(&a.mover)) {
            out << "Tgh = " << format_double(h->Tgh) << "\n";
            out << "TR = " << format_double(h->TR) << "\n";
            out << "RT_ratio = " << format_double(h->RT_ratio) << "\n";
            out << "Tw = " << format_double(h->Tw) << "\n";
        } else if (const auto* w = std::get_if<WindParams>(&a.mover)) {
            out << "Ti = " << format_double(w->Ti) << "\n";
            out << "Kpt = " << format_double(w->Kpt) << "\n";
            out << "Tpt = " << format_double(w->Tpt) << "\n";
        }
        out << "\n";
    }
    for (std::size_t k = 0; k < rc.system.ties.size(); ++k) {
        const TieLine& t = rc.system.ties[k];
        out << "[tie." << (k + 1) << "]\n";
        out << "between = " << (t.area_a + 1) << " " << (t.area_b + 1) << "\n";
        out << "t_sync = " << format_double(t.t_sync) << "\n\n";
    }
    const std::size_t n = rc.system.areas.size();
    auto bounds_line = [&](const char* name, std::size_t block) {
        out << name << " = " << format_double(rc.bounds.lower[block * n]) << " "
            << format_double(rc.bounds.upper[block * n]) << "\n";
    };
    out << "[bounds]\n";
    bounds_line("kp", 0);
    bounds_line("ki", 1);
    bounds_line("b", 2);
    bounds_line("r", 3);
    out << "\n[sim]\n";
    out << "dt = " << format_double(rc.sim.dt) << "\n";
    out << "horizon = " << format_double(rc.sim.horizon) << "\n";
    out << "record_stride = " << rc.sim.record_stride << "\n";
    out << "\n[bfo]\n";
    out << "S = " << rc.bfo.S << "\n";
    out << "Nc = " << rc.bfo.Nc << "\n";
    out << "Ns = " << rc.bfo.Ns << "\n";
    out << "Nre = " << rc.bfo.Nre << "\n";
    out << "Ned = " << rc.bfo.Ned << "\n";
    out << "Ped = " << format_double(rc.bfo.Ped) << "\n";
    out << "step_scale = " << format_double(rc.bfo.step_scale) << "\n";
    out << "step_scale_end = " << format_double(rc.bfo.step_scale_end) << "\n";
    out << "d_attract = " << format_double(rc.bfo.d_attract) << "\n";
    out << "w_attract = " << format_double(rc.bfo.w_attract) << "\n";
    out << "h_repellent = " << format_double(rc.bfo.h_repellent) << "\n";
    out << "w_repellent = " << format_double(rc.bfo.w_repellent) << "\n";
    out << "\n[pso]\n";
    out << "swarm_size = " << rc.pso.swarm_size << "\n";
    out << "iterations = " << rc.pso.iterations << "\n";
    out << "inertia = " << format_double(rc.pso.inertia) << "\n";
    out << "cognitive = " << format_double(rc.pso.cognitive) << "\n";
    out << "social = " << format_double(rc.pso.social) << "\n";
    out << "velocity_clamp = " << format_double(rc.pso.velocity_clamp) << "\n";
    out << "\n[gd]\n";
    out << "iterations = " << rc.gd.iterations << "\n";
    out << "fd_step = " << format_double(rc.gd.fd_step) << "\n";
    out << "learning_rate = " << format_double(rc.gd.learning_rate) << "\n";
    out << "backtrack = " << format_double(rc.gd.backtrack) << "\n";
    out << "min_rate = " << format_double(rc.gd.min_rate) << "\n";
    return out.str();
}

namespace detail {

inline std::pair<double, double> parse_pair(const std::string& v, const std::string& what) {
    std::istringstream in(v);
    std::string a, b, rest;
    if (!(in >> a >> b) || (in >> rest))
        throw std::invalid_argument(what + " expects two values");
    return {parse_double(a, what), parse_double(b, what)};
}

}  // namespace detail

inline RunConfig read_config_text(const std::string& text) {
    const ConfigText cfg = parse_config_text(text);
    RunConfig rc = nominal_run_config();

    const auto* system = cfg.find("system");
    if (!system) throw std::invalid_argument("config: missing [system] section");
    std::size_t n_areas = 0;
    for (const auto& [k, v] : *system) {
        if (k == "areas") n_areas = static_cast<std::size_t>(parse_long(v, "system.areas"));
        else throw std::invalid_argument("config: unknown key system." + k);
    }
    if (n_areas == 0) throw std::invalid_argument("config: system.areas must be >= 1");

    rc.system.areas.clear();
    rc.system.ties.clear();
    for (std::size_t i = 0; i < n_areas; ++i) {
        const std::string name = "area." + std::to_string(i + 1);
        const auto* sec = cfg.find(name);
        if (!sec) throw std::invalid_argument("config: missing [" + name + "] section");
        Area area;
        std::string type;
        for (const auto& [k, v] : *sec)
            if (k == "type") type = v;
        if (type == "thermal") area.mover = ThermalParams{};
        else if (type == "hydro") area.mover = HydroParams{};
        else if (type == "wind") area.mover = WindParams{};
        else throw std::invalid_argument("config: " + name + ".type must be thermal|hydro|wind");
        for (const auto& [k, v] : *sec) {
            const std::string what = name + "." + k;
            if (k == "type") continue;
            else if (k == "f_nom") area.plant.f_nom = parse_double(v, what);
            else if (k == "rating") area.plant.rating = parse_double(v, what);
            else if (k == "H") area.plant.H = parse_double(v, what);
            else if (k == "D") area.plant.D = parse_double(v, what);
            else if (k == "Kp") area.plant.Kp = parse_double(v, what);
            else if (k == "Tp") area.plant.Tp = parse_double(v, what);
            else if (auto* t = std::get_if<ThermalParams>(&area.mover)) {
                if (k == "Tg") t->Tg = parse_double(v, what);
                else if (k == "Tt") t->Tt = parse_double(v, what);
                else if (k == "Kr") t->Kr = parse_double(v, what);
                else if (k == "Tr") t->Tr = parse_double(v, what);
                else if (k == "grc") t->grc = parse_double(v, what);
                else if (k == "grc_enabled") t->grc_enabled = parse_bool(v, what);
                else throw std::invalid_argument("config: unknown key " + what);
            } else if (auto* h = std::get_if<HydroParams>(&area.mover)) {
                if (k == "Tgh") h->Tgh = parse_double(v, what);
                else if (k == "TR") h->TR = parse_double(v, what);
                else if (k == "RT_ratio") h->RT_ratio = parse_double(v, what);
                else if (k == "Tw") h->Tw = parse_double(v, what);
                else throw std::invalid_argument("config: unknown key " + what);
            } else if (auto* w = std::get_if<WindParams>(&area.mover)) {
                if (k == "Ti") w->Ti = parse_double(v, what);
                else if (k == "Kpt") w->Kpt = parse_double(v, what);
                else if (k == "Tpt") w->Tpt = parse_double(v, what);
                else throw std::invalid_argument("config: unknown key " + what);
            }
        }
        rc.system.areas.push_back(area);
    }
    for (std::size_t k = 1;; ++k) {
        const std::string name = "tie." + std::to_string(k);
        const auto* sec = cfg.find(name);
        if (!sec) break;
        TieLine tie;
        for (const auto& [key, v] : *sec) {
            const std::string what = name + "." + key;
            if (key == "between") {
                std::istringstream in(v);
                long a = 0, b = 0;
                if (!(in >> a >> b)) throw std::invalid_argument(what + " expects two indices");
                tie.area_a = static_cast<int>(a - 1);
                tie.area_b = static_cast<int>(b - 1);
            } else if (key == "t_sync") {
                tie.t_sync = parse_double(v, what);
            } else {
                throw std::invalid_argument("config: unknown key " + what);
            }
        }
        rc.system.ties.push_back(tie);
    }
    if (const auto* sec = cfg.find("bounds")) {
        rc.bounds = default_bounds(n_areas);
        const std::size_t n = n_areas;
        for (const auto& [k, v] : *sec) {
            const auto [lo, hi] = detail::parse_pair(v, "bounds." + k);
            std::size_t block;
            if (k == "kp") block = 0;
            else if (k == "ki") block = 1;
            else if (k == "b") block = 2;
            else if (k == "r") block = 3;
            else throw std::invalid_argument("config: unknown key bounds." + k);
            for (std::size_t i = 0; i < n; ++i) {
                rc.bounds.lower[block * n + i] = lo;
                rc.bounds.upper[block * n + i] = hi;
            }
        }
    } else {
        rc.bounds = default_bounds(n_areas);
    }
    if (const auto* sec = cfg.find("sim")) {
        for (const auto& [k, v] : *sec) {
            if (k == "dt") rc.sim.dt = parse_double(v, "sim.dt");
            else if (k == "horizon") rc.sim.horizon = parse_double(v, "sim.horizon");
            else if (k == "record_stride")
                rc.sim.record_stride = static_cast<int>(parse_long(v, "sim.record_stride"));
            else throw std::invalid_argument("config: unknown key sim." + k);
        }
    }
    if (const auto* sec = cfg.find("bfo")) {
        for (const auto& [k, v] : *sec) {
            if (k == "S") rc.bfo.S = static_cast<int>(parse_long(v, "bfo.S"));
            else if (k == "Nc") rc.bfo.Nc = static_cast<int>(parse_long(v, "bfo.Nc"));
            else if (k == "Ns") rc.bfo.Ns = static_cast<int>(parse_long(v, "bfo.Ns"));
            else if (k == "Nre") rc.bfo.Nre = static_cast<int>(parse_long(v, "bfo.Nre"));
            else if (k == "Ned") rc.bfo.Ned = static_cast<int>(parse_long(v, "bfo.Ned"));
            else if (k == "Ped") rc.bfo.Ped = parse_double(v, "bfo.Ped");
            else if (k == "step_scale") rc.bfo.step_scale = parse_double(v, "bfo.step_scale");
            else if (k == "step_scale_end")
                rc.bfo.step_scale_end = parse_double(v, "bfo.step_scale_end");
            else if (k == "d_attract") rc.bfo.d_attract = parse_double(v, "bfo.d_attract");
            else if (k == "w_attract") rc.bfo.w_attract = parse_double(v, "bfo.w_attract");
            else if (k == "h_repellent") rc.bfo.h_repellent = parse_double(v, "bfo.h_repellent");
            else if (k == "w_repellent") rc.bfo.w_repellent = parse_double(v, "bfo.w_repellent");
            else throw std::invalid_argument("config: unknown key bfo." + k);
        }
    }
    if (const auto* sec = cfg.find("pso")) {
        for (const auto& [k, v] : *sec) {
            if (k == "swarm_size") rc.pso.swarm_size = static_cast<int>(parse_long(v, "pso.swarm_size"));
            else if (k == "iterations")
                rc.pso.iterations = static_cast<int>(parse_long(v, "pso.iterations"));
            else if (k == "inertia") rc.pso.inertia = parse_double(v, "pso.inertia");
            else if (k == "cognitive") rc.pso.cognitive = parse_double(v, "pso.cognitive");
            else if (k == "social") rc.pso.social = parse_double(v, "pso.social");
            else if (k == "velocity_clamp")
                rc.pso.velocity_clamp = parse_double(v, "pso.velocity_clamp");
            else throw std::invalid_argument("config: unknown key pso." + k);
        }
    }
    if (const auto* sec = cfg.find("gd")) {
        for (const auto& [k, v] : *sec) {
            if (k == "iterations") rc.gd.iterations = static_cast<int>(parse_long(v, "gd.iterations"));
            else if (k == "fd_step") rc.gd.fd_step = parse_double(v, "gd.fd_step");
            else if (k == "learning_rate") rc.gd.learning_rate = parse_double(v, "gd.learning_rate");
            else if (k == "backtrack") rc.gd.backtrack = parse_double(v, "gd.backtrack");
            else if (k == "min_rate") rc.gd.min_rate = parse_double(v, "gd.min_rate");
            else throw std::invalid_argument("config: unknown key gd." + k);
        }
    }
    return rc;
}

// ---------------------------------------------------------------------------
// decision files

inline std::string write_decision_text(const DecisionVector& d) {
    std::ostringstream out;
    auto line = [&](const char* name, const std::vector<double>& v) {
        out << name << " =";
        for (double x : v) out << ' ' << format_double(x);
        out << "\n";
    };
    out << "[decision]\n";
    line("kp", d.kp);
    line("ki", d.ki);
    line("b", d.b);
    line("r", d.r);
    return out.str();
}

inline DecisionVector read_decision_text(const std::string& text) {
    const ConfigText cfg = parse_config_text(text);
    const auto* sec = cfg.find("decision");
    if (!sec) throw std::invalid_argument("decision file: missing [decision] section");
    DecisionVector d;
    for (const auto& [k, v] : *sec) {
        std::vector<double> vals;
        std::istringstream in(v);
        std::string tok;
        while (in >> tok) vals.push_back(parse_double(tok, "decision." + k));
        if (k == "kp") d.kp = vals;
        else if (k == "ki") d.ki = vals;
        else if (k == "b") d.b = vals;
        else if (k == "r") d.r = vals;
        else throw std::invalid_argument("decision file: unknown key " + k);
    }
    if (d.kp.empty() || d.kp.size() != d.ki.size() || d.kp.size() != d.b.size() ||
        d.kp.size() != d.r.size())
        throw std::invalid_argument("decision file: kp/ki/b/r must have equal nonzero length");
    return d;
}

// ---------------------------------------------------------------------------
// trace CSV

inline std::string trace_csv(const TraceSet& traces) {
    std::ostringstream out;
    out << "t";
    for (std::size_t i = 0; i < traces.delta_f.size(); ++i) out << ",delf" << (i + 1);
    for (const auto& [a, b] : traces.tie_pairs) out << ",ptie" << (a + 1) << (b + 1);
    for (std::size_t i = 0; i < traces.delta_p_g.size(); ++i) out << ",pg" << (i + 1);
    for (std::size_t i = 0; i < traces.ace.size(); ++i) out << ",ace" << (i + 1);
    out << "\n";
    for (std::size_t k = 0; k < traces.samples(); ++k) {
        out << format_double(traces.times[k]);
        for (const auto& s : traces.delta_f) out << ',' << format_double(s[k]);
        for (const auto& s : traces.delta_p_tie) out << ',' << format_double(s[k]);
        for (const auto& s : traces.delta_p_g) out << ',' << format_double(s[k]);
        for (const auto& s : traces.ace) out << ',' << format_double(s[k]);
        out << "\n";
    }
    return out.str();
}

// ---------------------------------------------------------------------------
// JSON result shapes

inline nlohmann::ordered_json decision_json(const DecisionVector& d) {
    return nlohmann::ordered_json{{"kp", d.kp}, {"ki", d.ki}, {"b", d.b}, {"r", d.r}};
}

inline nlohmann::ordered_json params_json(const BfoParams& p) {
    return nlohmann::ordered_json{
        {"S", p.S},
        {"Nc", p.Nc},
        {"Ns", p.Ns},
        {"Nre", p.Nre},
        {"Ned", p.Ned},
        {"Ped", p.Ped},
        {"step_scale", p.step_scale},
        {"step_scale_end", p.step_scale_end},
        {"d_attract", p.d_attract},
        {"w_attract", p.w_attract},
        {"h_repellent", p.h_repellent},
        {"w_repellent", p.w_repellent},
    };
}

inline nlohmann::ordered_json params_json(const PsoParams& p) {
    return nlohmann::ordered_json{
        {"swarm_size", p.swarm_size},   {"iterations", p.iterations},
        {"inertia", p.inertia},         {"cognitive", p.cognitive},
        {"social", p.social},           {"velocity_clamp", p.velocity_clamp},
    };
}

inline nlohmann::ordered_json params_json(const GdParams& p) {
    return nlohmann::ordered_json{
        {"iterations", p.iterations},   {"fd_step", p.fd_step},
        {"learning_rate", p.learning_rate}, {"backtrack", p.backtrack},
        {"min_rate", p.min_rate},
    };
}

inline nlohmann::ordered_json result_json(const OptResult& result, const std::string& method,
                                          const nlohmann::ordered_json& params) {
    return nlohmann::ordered_json{
        {"method", method},
        {"seed", result.seed},
        {"best", result.best},
        {"best_cost", result.best_cost},
        {"evaluations", result.evaluations},
        {"history", result.history},
        {"params", params},
    };
}

// ---------------------------------------------------------------------------
// scenario hashing (FNV-1a 64)

inline std::uint64_t fnv1a(const std::string& data) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : data) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

inline std::string hash_hex(std::uint64_t h) {
    static const char* digits = "0123456789abcdef";
    std::string s(16, '0');
    for (int i = 15; i >= 0; --i) {
        s[i] = digits[h & 0xf];
        h >>= 4;
    }
    return s;
}

// Canonical rendering of everything that defines a tuning/simulation
// scenario: the network, the bounds, the integration grid and the
// disturbance. Decisions and seeds are hashed separately where needed.
inline std::string scenario_canonical(const RunConfig& rc, const Disturbance& dist) {
    std::ostringstream out;
    out << write_config_text(rc);
    out << "[disturbance]\narea = " << (dist.area + 1)
        << "\nmagnitude = " << format_double(dist.magnitude)
        << "\nstart_time = " << format_double(dist.start_time) << "\n";
    return out.str();
}

inline std::string scenario_hash(const RunConfig& rc, const Disturbance& dist) {
    return hash_hex(fnv1a(scenario_canonical(rc, dist)));
}

// ---------------------------------------------------------------------------
// small file helpers

inline std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << content;
}

}  // namespace lfctune
