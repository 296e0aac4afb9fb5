#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "lfctune/model.hpp"
#include "lfctune/rng.hpp"

// Three minimizers over a box-bounded continuous domain behind one result
// shape: bacterial foraging (chemotaxis + swarming + reproduction +
// elimination-dispersal), global-best PSO, and finite-difference gradient
// descent. All candidates handed to the objective are clamped into bounds
// and every run is a pure function of (objective, bounds, params, seed).

namespace lfctune {

using Objective = std::function<double(const std::vector<double>&)>;

struct BfoParams {
    int S = 20;   // bacteria count, even
    int Nc = 30;  // chemotactic sweeps per generation
    int Ns = 4;   // swim length cap
    int Nre = 4;  // reproduction generations
    int Ned = 2;  // elimination-dispersal events
    double Ped = 0.25;       // per-bacterium dispersal probability
    double step_scale = 0.1; // initial step, fraction of per-dimension range
    // Final step fraction; the step decays geometrically across the run so
    // late sweeps refine instead of hopping at the initial radius. Set >=
    // step_scale (or <= 0) for a constant step.
    double step_scale_end = 0.0004;
    // Swarming coefficients. Default magnitudes sit below typical objective
    // differences and the repellent range is short, so the cell-to-cell bias
    // acts as a soft tiebreaker instead of a second objective that forbids a
    // tight final cluster.
    double d_attract = 1e-4;
    double w_attract = 0.2;
    double h_repellent = 1e-4;
    double w_repellent = 1e4;

    int Sr() const { return S / 2; } // reproductions per generation

    static BfoParams desk() { return BfoParams{}; }
    static BfoParams paper() {
        BfoParams p;
        p.S = 120;
        p.Nc = 120;
        p.Ns = 30;
        p.Nre = 30;
        p.Ned = 5;
        return p;
    }
};

struct PsoParams {
    int swarm_size = 30;
    int iterations = 160;
    double inertia = 0.729;
    double cognitive = 1.49445;
    double social = 1.49445;
    double velocity_clamp = 0.5; // fraction of per-dimension range

    static PsoParams desk() { return PsoParams{}; }
    static PsoParams paper() {
        PsoParams p;
        p.swarm_size = 120;
        p.iterations = 2000;
        return p;
    }
};

struct GdParams {
    int iterations = 270;
    double fd_step = 1e-3;      // finite-difference step, fraction of range
    double learning_rate = 0.01;
    double backtrack = 0.5;
    double min_rate = 1e-6;

    static GdParams desk() { return GdParams{}; }
    static GdParams paper() {
        GdParams p;
        p.iterations = 2000;
        return p;
    }
};

struct OptResult {
    std::vector<double> best;
    double best_cost = std::numeric_limits<double>::infinity();
    std::vector<double> history; // best-so-far cost per outer iteration
    long long evaluations = 0;
    std::uint64_t seed = 0;
};

namespace detail {

// Objective wrapper counting evaluations and tracking the best raw cost seen.
struct CountingObjective {
    const Objective& fn;
    long long evaluations = 0;
    double best_cost = std::numeric_limits<double>::infinity();
    std::vector<double> best;

    double operator()(const std::vector<double>& x) {
        ++evaluations;
        const double c = fn(x);
        if (c < best_cost) {
            best_cost = c;
            best = x;
        }
        return c;
    }
};

inline void check_bounds(const Bounds& bounds) {
    if (bounds.lower.size() != bounds.upper.size() || bounds.lower.empty())
        throw std::invalid_argument("bounds must be non-empty and consistent");
    for (std::size_t i = 0; i < bounds.lower.size(); ++i)
        if (!(bounds.lower[i] < bounds.upper[i]))
            throw std::invalid_argument("bounds must satisfy lower < upper");
}

inline std::vector<double> random_point(const Bounds& bounds, Rng& rng) {
    std::vector<double> x(bounds.dimension());
    for (std::size_t i = 0; i < x.size(); ++i) x[i] = rng.uniform(bounds.lower[i], bounds.upper[i]);
    return x;
}

}  // namespace detail

// Random unit direction for a tumble: components uniform on [-1, 1],
// normalized to Euclidean length 1. Consumes exactly p draws per attempt.
inline std::vector<double> tumble_direction(Rng& rng, std::size_t p) {
    if (p == 0) throw std::invalid_argument("tumble_direction: p must be >= 1");
    std::vector<double> dir(p);
    double norm2 = 0.0;
    do {
        norm2 = 0.0;
        for (auto& d : dir) {
            d = rng.uniform(-1.0, 1.0);
            norm2 += d * d;
        }
    } while (norm2 <= 0.0);
    const double norm = std::sqrt(norm2);
    for (auto& d : dir) d /= norm; // exact +-1 in one dimension
    return dir;
}

// Cell-to-cell attraction/repulsion offset added to the cost during movement
// decisions: sum over the population of a Gaussian attractant well and a
// Gaussian repellent hill around each member.
inline double swarming_cost(const std::vector<double>& theta,
                            const std::vector<std::vector<double>>& population,
                            const BfoParams& params) {
    if (population.empty()) throw std::invalid_argument("swarming_cost: empty population");
    double total = 0.0;
    for (const auto& other : population) {
        double d2 = 0.0;
        for (std::size_t m = 0; m < theta.size(); ++m) {
            const double diff = theta[m] - other[m];
            d2 += diff * diff;
        }
        total += -params.d_attract * std::exp(-params.w_attract * d2) +
                 params.h_repellent * std::exp(-params.w_repellent * d2);
    }
    return total;
}

struct SweepStats {
    std::vector<double> health; // per-bacterium augmented cost of this sweep
    long long evaluations = 0;
};

namespace detail {

// One chemotactic sweep. Tumbles are unconditional (the Eq. 1 move is always
// taken); swim steps are kept only while the augmented cost keeps improving.
// The one exception is the current raw-cost leader: its failed tumbles are
// rolled back, so the best-known basin is never abandoned to the random
// walk's outward drift. `step_scale` is the fraction of per-dimension range
// used for this sweep.
template <typename Obj>
SweepStats chemotaxis_sweep_impl(std::vector<std::vector<double>>& population,
                                 std::vector<double>& costs, Obj& objective,
                                 const Bounds& bounds, const BfoParams& params,
                                 double step_scale, Rng& rng) {
    const std::size_t s_count = population.size();
    const std::size_t p = bounds.dimension();
    SweepStats stats;
    stats.health.assign(s_count, 0.0);

    std::vector<double> step(p);
    for (std::size_t m = 0; m < p; ++m) step[m] = step_scale * (bounds.upper[m] - bounds.lower[m]);

    std::size_t leader = 0;
    for (std::size_t i = 1; i < s_count; ++i)
        if (costs[i] < costs[leader]) leader = i;

    std::vector<double> candidate(p);
    for (std::size_t i = 0; i < s_count; ++i) {
        const double j_here = costs[i] + swarming_cost(population[i], population, params);
        const std::vector<double> dir = tumble_direction(rng, p);
        auto move_from = [&](const std::vector<double>& from) {
            for (std::size_t m = 0; m < p; ++m) {
                double v = from[m] + step[m] * dir[m];
                if (v < bounds.lower[m]) v = bounds.lower[m];
                if (v > bounds.upper[m]) v = bounds.upper[m];
                candidate[m] = v;
            }
        };

        move_from(population[i]);
        double raw = objective(candidate);
        ++stats.evaluations;
        double j_new = raw + swarming_cost(candidate, population, params);
        const bool improved = j_new < j_here;
        if (improved || i != leader) {
            population[i] = candidate;
            costs[i] = raw;
        }

        if (improved) {
            double j_last = j_new;
            for (int m = 0; m < params.Ns; ++m) {
                move_from(population[i]);
                const double raw_try = objective(candidate);
                ++stats.evaluations;
                const double j_try = raw_try + swarming_cost(candidate, population, params);
                if (j_try < j_last) {
                    population[i] = candidate;
                    costs[i] = raw_try;
                    j_last = j_try;
                } else {
                    break;
                }
            }
            j_new = j_last;
        } else if (i == leader) {
            j_new = j_here;
        }
        stats.health[i] = j_new;
    }
    return stats;
}

}  // namespace detail

inline SweepStats chemotaxis_sweep(std::vector<std::vector<double>>& population,
                                   std::vector<double>& costs, const Objective& objective,
                                   const Bounds& bounds, const BfoParams& params,
                                   double step_scale, Rng& rng) {
    return detail::chemotaxis_sweep_impl(population, costs, objective, bounds, params, step_scale,
                                         rng);
}

// Sorts by accumulated health (lower = healthier), drops the worst half and
// refills their slots with copies of the best half. Ties break by index, and
// the population size never changes.
inline void reproduce(std::vector<std::vector<double>>& population, std::vector<double>& health,
                      std::vector<double>& costs) {
    const std::size_t s_count = population.size();
    if (s_count % 2 != 0) throw std::invalid_argument("reproduce: population size must be even");
    std::vector<std::size_t> order(s_count);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return health[a] < health[b]; });
    const std::size_t sr = s_count / 2;
    for (std::size_t k = 0; k < sr; ++k) {
        const std::size_t dst = order[sr + k];
        const std::size_t src = order[k];
        population[dst] = population[src];
        costs[dst] = costs[src];
        health[dst] = health[src];
    }
}

// Each bacterium is independently relocated uniformly inside the bounds with
// probability Ped. Returns the relocated indices (their costs are stale).
inline std::vector<std::size_t> eliminate_disperse(std::vector<std::vector<double>>& population,
                                                   const BfoParams& params, const Bounds& bounds,
                                                   Rng& rng) {
    std::vector<std::size_t> relocated;
    for (std::size_t i = 0; i < population.size(); ++i) {
        if (rng.uniform01() < params.Ped) {
            population[i] = detail::random_point(bounds, rng);
            relocated.push_back(i);
        }
    }
    return relocated;
}

namespace detail {

inline void check_bfo_params(const BfoParams& p) {
    if (p.S < 2 || p.S % 2 != 0) throw std::invalid_argument("BfoParams: S must be even and >= 2");
    if (p.Nc < 1 || p.Ns < 1 || p.Nre < 1 || p.Ned < 1)
        throw std::invalid_argument("BfoParams: counts must be >= 1");
    if (p.Ped < 0.0 || p.Ped > 1.0) throw std::invalid_argument("BfoParams: Ped must be in [0,1]");
    if (!(p.step_scale > 0.0 && p.step_scale < 1.0))
        throw std::invalid_argument("BfoParams: step_scale must be in (0,1)");
}

// Geometric interpolation from step_scale down to step_scale_end across the
// run's sweeps. The defaults contract the step about 2x per chemotactic
// generation, which matches the rate at which a healthy population closes in
// on a basin; decaying faster strands the population mid-descent.
inline double step_schedule(const BfoParams& p, long long sweep, long long total) {
    if (p.step_scale_end <= 0.0 || p.step_scale_end >= p.step_scale || total <= 1)
        return p.step_scale;
    const double f = static_cast<double>(sweep) / static_cast<double>(total - 1);
    return p.step_scale * std::pow(p.step_scale_end / p.step_scale, f);
}

}  // namespace detail

inline OptResult bfo_minimize(const Objective& objective, const Bounds& bounds,
                              const BfoParams& params, std::uint64_t seed) {
    detail::check_bounds(bounds);
    detail::check_bfo_params(params);
    Rng rng(seed);
    detail::CountingObjective counted{objective};

    const std::size_t s_count = static_cast<std::size_t>(params.S);
    std::vector<std::vector<double>> population(s_count);
    std::vector<double> costs(s_count);
    for (std::size_t i = 0; i < s_count; ++i) {
        population[i] = detail::random_point(bounds, rng);
        costs[i] = counted(population[i]);
    }

    OptResult result;
    result.seed = seed;
    result.history.reserve(1 + static_cast<std::size_t>(params.Ned) * params.Nre * params.Nc);
    result.history.push_back(counted.best_cost);

    const long long total_sweeps =
        static_cast<long long>(params.Ned) * params.Nre * params.Nc;
    long long sweep_index = 0;
    std::vector<double> health(s_count);
    for (int l = 0; l < params.Ned; ++l) {
        for (int k = 0; k < params.Nre; ++k) {
            std::fill(health.begin(), health.end(), 0.0);
            for (int j = 0; j < params.Nc; ++j) {
                const double step = detail::step_schedule(params, sweep_index++, total_sweeps);
                SweepStats stats = detail::chemotaxis_sweep_impl(population, costs, counted,
                                                                 bounds, params, step, rng);
                for (std::size_t i = 0; i < s_count; ++i) health[i] += stats.health[i];
                result.history.push_back(counted.best_cost);
            }
            reproduce(population, health, costs);
        }
        const auto relocated = eliminate_disperse(population, params, bounds, rng);
        for (std::size_t i : relocated) costs[i] = counted(population[i]);
    }

    result.best = counted.best;
    result.best_cost = counted.best_cost;
    result.evaluations = counted.evaluations;
    return result;
}

inline OptResult pso_minimize(const Objective& objective, const Bounds& bounds,
                              const PsoParams& params, std::uint64_t seed) {
    detail::check_bounds(bounds);
    if (params.swarm_size < 2) throw std::invalid_argument("PsoParams: swarm_size must be >= 2");
    if (!(params.inertia > 0.0 && params.inertia <= 1.0))
        throw std::invalid_argument("PsoParams: inertia must be in (0,1]");
    if (!(params.cognitive > 0.0 && params.social > 0.0))
        throw std::invalid_argument("PsoParams: c1 and c2 must be > 0");

    Rng rng(seed);
    detail::CountingObjective counted{objective};
    const std::size_t p = bounds.dimension();
    const std::size_t n = static_cast<std::size_t>(params.swarm_size);

    std::vector<double> vmax(p);
    for (std::size_t m = 0; m < p; ++m)
        vmax[m] = params.velocity_clamp * (bounds.upper[m] - bounds.lower[m]);

    std::vector<std::vector<double>> pos(n), vel(n, std::vector<double>(p, 0.0)), pbest(n);
    std::vector<double> pbest_cost(n);
    for (std::size_t i = 0; i < n; ++i) {
        pos[i] = detail::random_point(bounds, rng);
        pbest[i] = pos[i];
        pbest_cost[i] = counted(pos[i]);
    }
    std::size_t g = static_cast<std::size_t>(
        std::min_element(pbest_cost.begin(), pbest_cost.end()) - pbest_cost.begin());
    std::vector<double> gbest = pbest[g];
    double gbest_cost = pbest_cost[g];

    OptResult result;
    result.seed = seed;
    result.history.reserve(1 + static_cast<std::size_t>(params.iterations));
    result.history.push_back(gbest_cost);

    for (int iter = 0; iter < params.iterations; ++iter) {
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t m = 0; m < p; ++m) {
                const double r1 = rng.uniform01();
                const double r2 = rng.uniform01();
                double v = params.inertia * vel[i][m] +
                           params.cognitive * r1 * (pbest[i][m] - pos[i][m]) +
                           params.social * r2 * (gbest[m] - pos[i][m]);
                if (v > vmax[m]) v = vmax[m];
                if (v < -vmax[m]) v = -vmax[m];
                vel[i][m] = v;
                double x = pos[i][m] + v;
                if (x < bounds.lower[m]) x = bounds.lower[m];
                if (x > bounds.upper[m]) x = bounds.upper[m];
                pos[i][m] = x;
            }
        }
        for (std::size_t i = 0; i < n; ++i) {
            const double c = counted(pos[i]);
            if (c < pbest_cost[i]) {
                pbest_cost[i] = c;
                pbest[i] = pos[i];
            }
            if (c < gbest_cost) {
                gbest_cost = c;
                gbest = pos[i];
            }
        }
        result.history.push_back(gbest_cost);
    }

    result.best = counted.best;
    result.best_cost = counted.best_cost;
    result.evaluations = counted.evaluations;
    return result;
}

// Central finite-difference gradient with per-dimension step rel_step*(range).
// Probes are clamped into bounds, so the difference becomes one-sided at the
// box edge (and zero if a dimension's probes coincide).
template <typename Obj>
std::vector<double> fd_gradient(Obj& objective, const Bounds& bounds, double rel_step,
                                const std::vector<double>& x) {
    const std::size_t p = bounds.dimension();
    std::vector<double> grad(p, 0.0);
    std::vector<double> probe(x);
    for (std::size_t m = 0; m < p; ++m) {
        const double h = rel_step * (bounds.upper[m] - bounds.lower[m]);
        const double hi = std::min(x[m] + h, bounds.upper[m]);
        const double lo = std::max(x[m] - h, bounds.lower[m]);
        if (hi <= lo) continue;
        probe[m] = hi;
        const double f_hi = objective(probe);
        probe[m] = lo;
        const double f_lo = objective(probe);
        probe[m] = x[m];
        grad[m] = (f_hi - f_lo) / (hi - lo);
    }
    return grad;
}

inline OptResult gd_minimize(const Objective& objective, const Bounds& bounds,
                             const GdParams& params, const std::vector<double>& start) {
    detail::check_bounds(bounds);
    if (params.iterations < 1 || !(params.fd_step > 0.0) || !(params.learning_rate > 0.0) ||
        !(params.min_rate > 0.0) || !(params.backtrack > 0.0 && params.backtrack < 1.0))
        throw std::invalid_argument("GdParams: invalid values");

    detail::CountingObjective counted{objective};
    std::vector<double> x = bounds.clamp(start);
    double fx = counted(x);

    OptResult result;
    result.history.push_back(fx);

    double rate = params.learning_rate;
    for (int iter = 0; iter < params.iterations; ++iter) {
        const std::vector<double> grad = fd_gradient(counted, bounds, params.fd_step, x);
        bool improved = false;
        while (rate >= params.min_rate) {
            std::vector<double> next(x);
            for (std::size_t m = 0; m < next.size(); ++m) next[m] -= rate * grad[m];
            next = bounds.clamp(next);
            const double fn = counted(next);
            if (fn < fx) {
                x = std::move(next);
                fx = fn;
                improved = true;
                break;
            }
            rate *= params.backtrack;
        }
        result.history.push_back(fx);
        if (!improved) break; // rate exhausted below min_rate
    }

    result.best = x;
    result.best_cost = fx;
    result.evaluations = counted.evaluations;
    return result;
}

}  // namespace lfctune
