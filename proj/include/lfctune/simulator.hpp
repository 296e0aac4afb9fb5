#pragma once

#include <cmath>
#include <cstddef>
#include <numbers>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "lfctune/model.hpp"

// Assembles the interconnected block diagram into a first-order state vector
// and integrates it with classical fixed-step RK4 under a single step-load
// disturbance.
//
// Per-area state block: [delta_f, ACE integral, prime-mover chain...], ties
// appended last, one state per unordered pair with
//   d delta_p_tie_ij / dt = T_ij * (delta_f_i - delta_f_j)
// where T_ij is the effective synchronizing gain in pu MW/(Hz s) (the 2*pi
// factor of the classical 2*pi*T° form is already folded into the tabled
// value). Chain realizations:
//   thermal  governor 1/(1+sTg) -> turbine 1/(1+sTt) -> reheat (1+sKrTr)/(1+sTr)
//            reheat output y = Kr*x_t + (1-Kr)*x_r with x_r' = (x_t - x_r)/Tr
//   hydro    governor 1/(1+sTgh) -> droop comp (1+sTR)/(1+s*RT*TR)
//            -> penstock (1-sTw)/(1+0.5sTw), y = 3*x_w - 2*c (feedthrough)
//   wind     actuator 1/(1+sTi) -> plant Kpt/(1+sTpt)
// The generation rate constraint is a clamp on the turbine-output state
// derivative, applied inside every RK4 stage.

namespace lfctune {

struct Disturbance {
    int area = 0;          // 0-based
    double magnitude = 0.01; // pu MW
    double start_time = 0.0; // s
};

struct SimOptions {
    double dt = 0.01;      // integration step, s
    double horizon = 250.0; // s
    int record_stride = 1; // record every n-th step
};

struct TraceSet {
    std::vector<double> times;
    std::vector<std::vector<double>> delta_f;     // [area][sample], Hz
    std::vector<std::vector<double>> delta_p_tie; // [pair][sample], pu MW
    std::vector<std::vector<double>> delta_p_g;   // [area][sample], pu MW
    std::vector<std::vector<double>> ace;         // [area][sample], pu MW
    std::vector<std::pair<int, int>> tie_pairs;   // 0-based area indices
    bool diverged = false;
    double divergence_time = 0.0;

    std::size_t samples() const { return times.size(); }
};

inline double grc_clamp(double rate, double limit) {
    if (rate > limit) return limit;
    if (rate < -limit) return -limit;
    return rate;
}

namespace detail {

enum class MoverKind { thermal, hydro, wind };

struct AreaBlock {
    MoverKind kind;
    std::size_t off = 0; // index of delta_f in the state vector
    int chain_n = 0;
    // plant
    double kp_over_tp = 0, inv_tp = 0;
    // controller
    double bias = 0, kp = 0, ki = 0, inv_r = 0;
    // thermal
    double inv_tg = 0, inv_tt = 0, kr = 0, inv_tr = 0, grc = 0;
    bool grc_on = false;
    // hydro
    double inv_tgh = 0, inv_t2 = 0, comp_a = 0, inv_t3 = 0;
    // wind
    double inv_ti = 0, kpt = 0, inv_tpt = 0;
};

struct TieBlock {
    int a = 0, b = 0;
    std::size_t off = 0;
    double gain = 0;       // 2*pi*T_sync
    double recv_scale = 0; // -rating_a / rating_b
};

struct Assembled {
    std::vector<AreaBlock> areas;
    std::vector<TieBlock> ties;
    std::size_t n_states = 0;
};

inline int chain_states(const Area& a) {
    return is_wind(a) ? 2 : 3;
}

inline Assembled assemble(const SystemConfig& cfg, const DecisionVector& d) {
    Assembled m;
    std::size_t off = 0;
    for (std::size_t i = 0; i < cfg.areas.size(); ++i) {
        const Area& a = cfg.areas[i];
        AreaBlock blk;
        blk.off = off;
        blk.chain_n = chain_states(a);
        blk.kp_over_tp = a.plant.Kp / a.plant.Tp;
        blk.inv_tp = 1.0 / a.plant.Tp;
        blk.bias = d.b[i];
        blk.kp = d.kp[i];
        blk.ki = d.ki[i];
        blk.inv_r = 1.0 / d.r[i];
        if (const auto* t = std::get_if<ThermalParams>(&a.mover)) {
            blk.kind = MoverKind::thermal;
            blk.inv_tg = 1.0 / t->Tg;
            blk.inv_tt = 1.0 / t->Tt;
            blk.kr = t->Kr;
            blk.inv_tr = 1.0 / t->Tr;
            blk.grc = t->grc;
            blk.grc_on = t->grc_enabled;
        } else if (const auto* h = std::get_if<HydroParams>(&a.mover)) {
            blk.kind = MoverKind::hydro;
            blk.inv_tgh = 1.0 / h->Tgh;
            blk.inv_t2 = 1.0 / (h->RT_ratio * h->TR);
            blk.comp_a = 1.0 / h->RT_ratio;
            blk.inv_t3 = 2.0 / h->Tw;
        } else {
            const auto& w = std::get<WindParams>(a.mover);
            blk.kind = MoverKind::wind;
            blk.inv_ti = 1.0 / w.Ti;
            blk.kpt = w.Kpt;
            blk.inv_tpt = 1.0 / w.Tpt;
        }
        off += 2 + static_cast<std::size_t>(blk.chain_n);
        m.areas.push_back(blk);
    }
    for (const TieLine& t : cfg.ties) {
        TieBlock blk;
        blk.a = t.area_a;
        blk.b = t.area_b;
        blk.off = off++;
        blk.gain = t.t_sync;
        blk.recv_scale = -cfg.areas[t.area_a].plant.rating / cfg.areas[t.area_b].plant.rating;
        m.ties.push_back(blk);
    }
    m.n_states = off;
    return m;
}

// Generation output of an area's prime-mover chain, a pure function of its
// chain states (plus governor feedthrough for hydro).
inline double chain_output(const AreaBlock& a, const double* x) {
    switch (a.kind) {
        case MoverKind::thermal:
            return a.kr * x[a.off + 3] + (1.0 - a.kr) * x[a.off + 4];
        case MoverKind::hydro: {
            const double c = a.comp_a * x[a.off + 2] + (1.0 - a.comp_a) * x[a.off + 3];
            return 3.0 * x[a.off + 4] - 2.0 * c;
        }
        case MoverKind::wind:
            return x[a.off + 3];
    }
    return 0.0;
}

}  // namespace detail

// Number of first-order states the assembled system has: per area the plant
// and controller integrator plus the prime-mover chain, plus one per tie.
inline std::size_t state_dimension(const SystemConfig& cfg) {
    std::size_t n = 0;
    for (const Area& a : cfg.areas) n += 2 + static_cast<std::size_t>(detail::chain_states(a));
    return n + cfg.ties.size();
}

inline TraceSet simulate(const SystemConfig& cfg, const DecisionVector& decision,
                         const Disturbance& dist, const SimOptions& opt) {
    {
        auto errors = validate(cfg);
        if (!errors.empty())
            throw std::invalid_argument("simulate: invalid configuration: " + errors.front());
    }
    if (decision.areas() != cfg.areas.size() || decision.ki.size() != cfg.areas.size() ||
        decision.b.size() != cfg.areas.size() || decision.r.size() != cfg.areas.size())
        throw std::invalid_argument("simulate: decision dimension does not match area count");
    if (!(opt.dt > 0.0) || !(opt.horizon >= 10.0 * opt.dt) || opt.record_stride < 1)
        throw std::invalid_argument("simulate: invalid options");
    if (dist.area < 0 || dist.area >= static_cast<int>(cfg.areas.size()))
        throw std::invalid_argument("simulate: disturbance area out of range");

    const detail::Assembled m = detail::assemble(cfg, decision);
    const std::size_t n = m.n_states;
    const std::size_t n_areas = m.areas.size();
    const std::size_t n_ties = m.ties.size();

    std::vector<double> x(n, 0.0), xt(n), k1(n), k2(n), k3(n), k4(n);
    std::vector<double> tie_total(n_areas);

    auto rhs = [&](double t, const double* s, double* ds) {
        for (std::size_t i = 0; i < n_areas; ++i) tie_total[i] = 0.0;
        for (const auto& tie : m.ties) {
            const double p = s[tie.off];
            tie_total[tie.a] += p;
            tie_total[tie.b] += tie.recv_scale * p;
        }
        for (std::size_t i = 0; i < n_areas; ++i) {
            const auto& a = m.areas[i];
            const double f = s[a.off];
            const double z = s[a.off + 1];
            const double ace = a.bias * f + tie_total[i];
            const double u = -(a.kp * ace + a.ki * z);
            const double gov_in = u - f * a.inv_r;
            double p_gen = 0.0;
            switch (a.kind) {
                case detail::MoverKind::thermal: {
                    const double g = s[a.off + 2], tb = s[a.off + 3], rh = s[a.off + 4];
                    ds[a.off + 2] = (gov_in - g) * a.inv_tg;
                    double rate = (g - tb) * a.inv_tt;
                    if (a.grc_on) rate = grc_clamp(rate, a.grc);
                    ds[a.off + 3] = rate;
                    ds[a.off + 4] = (tb - rh) * a.inv_tr;
                    p_gen = a.kr * tb + (1.0 - a.kr) * rh;
                    break;
                }
                case detail::MoverKind::hydro: {
                    const double g = s[a.off + 2], c2 = s[a.off + 3], w = s[a.off + 4];
                    ds[a.off + 2] = (gov_in - g) * a.inv_tgh;
                    ds[a.off + 3] = (g - c2) * a.inv_t2;
                    const double c = a.comp_a * g + (1.0 - a.comp_a) * c2;
                    ds[a.off + 4] = (c - w) * a.inv_t3;
                    p_gen = 3.0 * w - 2.0 * c;
                    break;
                }
                case detail::MoverKind::wind: {
                    const double a1 = s[a.off + 2], p2 = s[a.off + 3];
                    ds[a.off + 2] = (gov_in - a1) * a.inv_ti;
                    ds[a.off + 3] = (a.kpt * a1 - p2) * a.inv_tpt;
                    p_gen = p2;
                    break;
                }
            }
            const double p_load =
                (static_cast<int>(i) == dist.area && t >= dist.start_time) ? dist.magnitude : 0.0;
            ds[a.off] = a.kp_over_tp * (p_gen - p_load - tie_total[i]) - f * a.inv_tp;
            ds[a.off + 1] = ace;
        }
        for (const auto& tie : m.ties) {
            ds[tie.off] = tie.gain * (s[m.areas[tie.a].off] - s[m.areas[tie.b].off]);
        }
    };

    const double dt = opt.dt;
    const long long n_steps = static_cast<long long>(std::floor(opt.horizon / dt + 1e-9));
    const long long stride = opt.record_stride;

    TraceSet out;
    const std::size_t n_samples = static_cast<std::size_t>(n_steps / stride) + 1;
    out.times.reserve(n_samples);
    out.delta_f.assign(n_areas, {});
    out.delta_p_g.assign(n_areas, {});
    out.ace.assign(n_areas, {});
    out.delta_p_tie.assign(n_ties, {});
    for (auto& v : out.delta_f) v.reserve(n_samples);
    for (auto& v : out.delta_p_g) v.reserve(n_samples);
    for (auto& v : out.ace) v.reserve(n_samples);
    for (auto& v : out.delta_p_tie) v.reserve(n_samples);
    for (const auto& tie : m.ties) out.tie_pairs.emplace_back(tie.a, tie.b);

    auto record = [&](double t) {
        out.times.push_back(t);
        for (std::size_t i = 0; i < n_areas; ++i) tie_total[i] = 0.0;
        for (const auto& tie : m.ties) {
            const double p = x[tie.off];
            tie_total[tie.a] += p;
            tie_total[tie.b] += tie.recv_scale * p;
        }
        for (std::size_t i = 0; i < n_areas; ++i) {
            const auto& a = m.areas[i];
            out.delta_f[i].push_back(x[a.off]);
            out.delta_p_g[i].push_back(detail::chain_output(a, x.data()));
            out.ace[i].push_back(a.bias * x[a.off] + tie_total[i]);
        }
        for (std::size_t k = 0; k < n_ties; ++k) out.delta_p_tie[k].push_back(x[m.ties[k].off]);
    };

    record(0.0);
    for (long long step = 0; step < n_steps; ++step) {
        const double t = static_cast<double>(step) * dt;
        rhs(t, x.data(), k1.data());
        for (std::size_t i = 0; i < n; ++i) xt[i] = x[i] + 0.5 * dt * k1[i];
        rhs(t + 0.5 * dt, xt.data(), k2.data());
        for (std::size_t i = 0; i < n; ++i) xt[i] = x[i] + 0.5 * dt * k2[i];
        rhs(t + 0.5 * dt, xt.data(), k3.data());
        for (std::size_t i = 0; i < n; ++i) xt[i] = x[i] + dt * k3[i];
        rhs(t + dt, xt.data(), k4.data());
        for (std::size_t i = 0; i < n; ++i)
            x[i] += dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);

        bool bad = false;
        for (std::size_t i = 0; i < n && !bad; ++i)
            if (!std::isfinite(x[i])) bad = true;
        if (!bad)
            for (const auto& a : m.areas)
                if (std::abs(x[a.off]) > 5.0) {
                    bad = true;
                    break;
                }
        if (bad) {
            out.diverged = true;
            out.divergence_time = static_cast<double>(step + 1) * dt;
            break;
        }
        if ((step + 1) % stride == 0) record(static_cast<double>(step + 1) * dt);
    }
    return out;
}

}  // namespace lfctune
