#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>
#include <variant>
#include <vector>

// Physical description of an interconnected multi-area LFC network and the
// decision space of the tunable controller/system parameters.

namespace lfctune {

// Constants shared by every area regardless of its prime mover. Kp and Tp are
// the load/inertia block gain and time constant; they are redundant with
// (H, D, f_nom) and validation cross-checks them.
struct PlantCommon {
    double f_nom = 60.0;     // nominal frequency, Hz
    double rating = 2000.0;  // area capacity, MW
    double H = 5.0;          // inertia constant, s
    double D = 0.00833;      // load damping, pu MW/Hz
    double Kp = 120.0;       // plant gain, Hz/pu MW
    double Tp = 20.0;        // plant time constant, s
};

struct ThermalParams {
    double Tg = 0.08;  // governor time constant, s
    double Tt = 0.3;   // turbine time constant, s
    double Kr = 0.5;   // reheat gain
    double Tr = 10.0;  // reheat time constant, s
    double grc = 0.02; // generation rate limit on the turbine state, pu MW/s
    bool grc_enabled = true;
};

// Mechanical-hydraulic governor with transient-droop compensation and a
// single-penstock water column.
struct HydroParams {
    double Tgh = 0.2;       // governor time constant, s
    double TR = 5.0;        // transient-droop reset time, s
    double RT_ratio = 4.75; // temporary-to-permanent droop ratio
    double Tw = 1.0;        // water starting time, s
};

// Constant wind speed is assumed, so the aerodynamic operating point is fixed
// and the plant reduces to an actuator lag followed by a first-order plant.
struct WindParams {
    double Ti = 3.0;    // pitch/actuator lag, s
    double Kpt = 0.012; // plant gain
    double Tpt = 10.55; // plant time constant, s
};

using PrimeMover = std::variant<ThermalParams, HydroParams, WindParams>;

struct Area {
    PlantCommon plant;
    PrimeMover mover;
};

struct TieLine {
    int area_a = 0;        // area index, 0-based
    int area_b = 1;        // area index, 0-based
    double t_sync = 0.544; // effective synchronizing gain, pu MW/(Hz s)
};

struct SystemConfig {
    std::vector<Area> areas;
    std::vector<TieLine> ties;
};

inline bool is_thermal(const Area& a) { return std::holds_alternative<ThermalParams>(a.mover); }
inline bool is_hydro(const Area& a) { return std::holds_alternative<HydroParams>(a.mover); }
inline bool is_wind(const Area& a) { return std::holds_alternative<WindParams>(a.mover); }

// The twelve tunables of the three-area problem: per-area PI gains plus the
// frequency bias and speed regulation of each area. Flattened layout is
// [kp..., ki..., b..., r...].
struct DecisionVector {
    std::vector<double> kp; // PI proportional gain
    std::vector<double> ki; // PI integral gain, 1/s
    std::vector<double> b;  // frequency bias, pu MW/Hz
    std::vector<double> r;  // speed regulation, Hz/pu MW

    std::size_t areas() const { return kp.size(); }

    std::vector<double> flatten() const {
        std::vector<double> x;
        x.reserve(4 * kp.size());
        x.insert(x.end(), kp.begin(), kp.end());
        x.insert(x.end(), ki.begin(), ki.end());
        x.insert(x.end(), b.begin(), b.end());
        x.insert(x.end(), r.begin(), r.end());
        return x;
    }

    static DecisionVector unflatten(const std::vector<double>& x) {
        if (x.size() % 4 != 0)
            throw std::invalid_argument("decision vector length must be a multiple of 4");
        const std::size_t n = x.size() / 4;
        DecisionVector d;
        d.kp.assign(x.begin(), x.begin() + n);
        d.ki.assign(x.begin() + n, x.begin() + 2 * n);
        d.b.assign(x.begin() + 2 * n, x.begin() + 3 * n);
        d.r.assign(x.begin() + 3 * n, x.end());
        return d;
    }
};

// Box constraints in the flattened decision layout.
struct Bounds {
    std::vector<double> lower;
    std::vector<double> upper;

    std::size_t dimension() const { return lower.size(); }

    bool contains(const std::vector<double>& x) const {
        if (x.size() != lower.size()) return false;
        for (std::size_t i = 0; i < x.size(); ++i)
            if (x[i] < lower[i] || x[i] > upper[i]) return false;
        return true;
    }

    std::vector<double> clamp(const std::vector<double>& x) const {
        if (x.size() != lower.size())
            throw std::invalid_argument("bounds/vector dimension mismatch");
        std::vector<double> y(x);
        for (std::size_t i = 0; i < y.size(); ++i) {
            if (y[i] < lower[i]) y[i] = lower[i];
            if (y[i] > upper[i]) y[i] = upper[i];
        }
        return y;
    }
};

// Gain/bias/droop ranges bracketing the nominal values (B = D + 1/R ~ 0.425,
// R = 2.4) with stable margins.
inline Bounds default_bounds(std::size_t n_areas) {
    Bounds b;
    b.lower.reserve(4 * n_areas);
    b.upper.reserve(4 * n_areas);
    auto push = [&](double lo, double hi, std::size_t n) {
        for (std::size_t i = 0; i < n; ++i) {
            b.lower.push_back(lo);
            b.upper.push_back(hi);
        }
    };
    push(0.001, 2.0, n_areas); // kp
    push(0.001, 2.0, n_areas); // ki
    push(0.1, 1.0, n_areas);   // b
    push(1.0, 8.0, n_areas);   // r
    return b;
}

// The published three-area configuration: reheat thermal (2000 MW), wind
// (35 MW) and hydro (2000 MW), every tie at 0.544 pu MW/Hz.
inline SystemConfig nominal_system() {
    SystemConfig cfg;
    PlantCommon common; // 60 Hz, H=5, D=0.00833, Kp=120, Tp=20

    Area thermal;
    thermal.plant = common;
    thermal.plant.rating = 2000.0;
    thermal.mover = ThermalParams{};

    Area wind;
    wind.plant = common;
    wind.plant.rating = 35.0;
    wind.mover = WindParams{};

    Area hydro;
    hydro.plant = common;
    hydro.plant.rating = 2000.0;
    hydro.mover = HydroParams{};

    cfg.areas = {thermal, wind, hydro};
    cfg.ties = {TieLine{0, 1, 0.544}, TieLine{0, 2, 0.544}, TieLine{1, 2, 0.544}};
    return cfg;
}

// Workable default operating point: tabled bias value and moderate PI gains.
// Hydro areas get a higher droop; at 2.4 the water column's inverse response
// couples with the ties into an undamped inter-area swing once the thermal
// unit is rate-limited.
inline DecisionVector nominal_decision(std::size_t n_areas) {
    DecisionVector d;
    d.kp.assign(n_areas, 0.1);
    d.ki.assign(n_areas, 0.1);
    d.b.assign(n_areas, 0.425);
    d.r.assign(n_areas, 2.4);
    return d;
}

inline DecisionVector nominal_decision(const SystemConfig& cfg) {
    DecisionVector d = nominal_decision(cfg.areas.size());
    for (std::size_t i = 0; i < cfg.areas.size(); ++i)
        if (is_hydro(cfg.areas[i])) d.r[i] = 5.0;
    return d;
}

inline DecisionVector nominal_decision() { return nominal_decision(nominal_system()); }

namespace detail {

inline void check_positive(std::vector<std::string>& errors, double v,
                           const std::string& path) {
    if (!(v > 0.0)) errors.push_back(path + " must be > 0");
}

}  // namespace detail

// Collects every violated invariant; an empty result means the configuration
// is usable. Never throws on bad values.
inline std::vector<std::string> validate(const SystemConfig& cfg) {
    std::vector<std::string> errors;
    if (cfg.areas.empty()) {
        errors.push_back("system: at least one area required");
        return errors;
    }
    for (std::size_t i = 0; i < cfg.areas.size(); ++i) {
        const Area& a = cfg.areas[i];
        const std::string at = "area " + std::to_string(i + 1) + ": ";
        detail::check_positive(errors, a.plant.f_nom, at + "f_nom");
        detail::check_positive(errors, a.plant.rating, at + "rating");
        detail::check_positive(errors, a.plant.H, at + "H");
        detail::check_positive(errors, a.plant.Kp, at + "Kp");
        detail::check_positive(errors, a.plant.Tp, at + "Tp");
        if (a.plant.D < 0.0) errors.push_back(at + "D must be >= 0");
        if (a.plant.D > 0.0 && a.plant.f_nom > 0.0 && a.plant.Tp > 0.0 && a.plant.Kp > 0.0) {
            const double tp_ref = 2.0 * a.plant.H / (a.plant.f_nom * a.plant.D);
            if (std::abs(a.plant.Tp - tp_ref) / a.plant.Tp >= 0.01)
                errors.push_back(at + "Tp inconsistent with 2H/(f_nom*D)");
            const double kp_ref = 1.0 / a.plant.D;
            if (std::abs(a.plant.Kp - kp_ref) / a.plant.Kp >= 0.01)
                errors.push_back(at + "Kp inconsistent with 1/D");
        }
        if (const auto* t = std::get_if<ThermalParams>(&a.mover)) {
            detail::check_positive(errors, t->Tg, at + "thermal governor constant Tg");
            detail::check_positive(errors, t->Tt, at + "thermal turbine constant Tt");
            detail::check_positive(errors, t->Tr, at + "reheat constant Tr");
            if (!(t->Kr > 0.0 && t->Kr <= 1.0)) errors.push_back(at + "Kr must be in (0, 1]");
            detail::check_positive(errors, t->grc, at + "grc");
        } else if (const auto* h = std::get_if<HydroParams>(&a.mover)) {
            detail::check_positive(errors, h->Tgh, at + "hydro governor constant Tgh");
            detail::check_positive(errors, h->TR, at + "hydro reset time TR");
            detail::check_positive(errors, h->RT_ratio, at + "hydro droop ratio RT_ratio");
            detail::check_positive(errors, h->Tw, at + "water starting time Tw");
            if (h->Tw > 0.0 && h->TR > 0.0 && !(h->Tw < 2.0 * h->TR))
                errors.push_back(at + "Tw must be < 2*TR");
        } else if (const auto* w = std::get_if<WindParams>(&a.mover)) {
            detail::check_positive(errors, w->Ti, at + "wind actuator lag Ti");
            detail::check_positive(errors, w->Kpt, at + "wind gain Kpt");
            detail::check_positive(errors, w->Tpt, at + "wind plant constant Tpt");
        }
    }
    const int n = static_cast<int>(cfg.areas.size());
    std::vector<std::pair<int, int>> seen;
    for (std::size_t k = 0; k < cfg.ties.size(); ++k) {
        const TieLine& t = cfg.ties[k];
        const std::string at = "tie " + std::to_string(k + 1) + ": ";
        if (t.area_a < 0 || t.area_a >= n || t.area_b < 0 || t.area_b >= n) {
            errors.push_back(at + "area index out of range");
            continue;
        }
        if (t.area_a == t.area_b) errors.push_back(at + "end areas must differ");
        if (!(t.t_sync > 0.0)) errors.push_back(at + "T_sync must be > 0");
        auto key = std::minmax(t.area_a, t.area_b);
        std::pair<int, int> p{key.first, key.second};
        for (const auto& s : seen)
            if (s == p) errors.push_back(at + "duplicate tie between the same areas");
        seen.push_back(p);
    }
    // connectivity over the tie graph (one area is trivially connected)
    if (n > 1) {
        std::vector<int> comp(n);
        for (int i = 0; i < n; ++i) comp[i] = i;
        bool merged = true;
        while (merged) {
            merged = false;
            for (const TieLine& t : cfg.ties) {
                if (t.area_a < 0 || t.area_a >= n || t.area_b < 0 || t.area_b >= n) continue;
                int ca = comp[t.area_a], cb = comp[t.area_b];
                if (ca != cb) {
                    for (int i = 0; i < n; ++i)
                        if (comp[i] == cb) comp[i] = ca;
                    merged = true;
                }
            }
        }
        for (int i = 1; i < n; ++i)
            if (comp[i] != comp[0]) {
                errors.push_back("system: tie graph is not connected");
                break;
            }
    }
    return errors;
}

// a_ij = -rating_i / rating_j, the factor scaling a tie flow into the
// receiving area's per-unit base.
inline double capacity_ratio(const SystemConfig& cfg, int i, int j) {
    const int n = static_cast<int>(cfg.areas.size());
    if (i < 0 || i >= n || j < 0 || j >= n)
        throw std::out_of_range("capacity_ratio: area index out of range");
    if (i == j) throw std::invalid_argument("capacity_ratio: indices must differ");
    return -cfg.areas[i].plant.rating / cfg.areas[j].plant.rating;
}

}  // namespace lfctune
