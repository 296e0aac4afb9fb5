#pragma once

#include <stdexcept>
#include <vector>

#include "lfctune/model.hpp"
#include "lfctune/simulator.hpp"

// ISE performance index over a disturbance run and its wrapper turning
// (decision, scenario) into a scalar cost for the optimizers.

namespace lfctune {

struct Scenario {
    SystemConfig config;
    Disturbance disturbance;
    SimOptions options;
    double penalty = 1e6; // assigned on divergence; above any finite ISE
};

// Trapezoidal integral of sum(delta_f_i^2) + sum(delta_p_tie_ij^2) over the
// recorded horizon. Pure quadrature; divergence handling lives in evaluate.
inline double ise(const TraceSet& traces) {
    const std::size_t n = traces.samples();
    if (n < 2) return 0.0;
    double total = 0.0;
    auto accumulate = [&](const std::vector<double>& series) {
        for (std::size_t k = 0; k + 1 < n; ++k) {
            const double dt = traces.times[k + 1] - traces.times[k];
            total += 0.5 * dt * (series[k] * series[k] + series[k + 1] * series[k + 1]);
        }
    };
    for (const auto& s : traces.delta_f) accumulate(s);
    for (const auto& s : traces.delta_p_tie) accumulate(s);
    return total;
}

// Runs the scenario and scores it. Diverging decisions are charged the
// penalty plus the unreached horizon so that later blow-ups rank better.
inline double evaluate(const DecisionVector& decision, const Scenario& scenario) {
    auto errors = validate(scenario.config);
    if (!errors.empty())
        throw std::invalid_argument("evaluate: invalid configuration: " + errors.front());
    const TraceSet traces =
        simulate(scenario.config, decision, scenario.disturbance, scenario.options);
    if (traces.diverged)
        return scenario.penalty + (scenario.options.horizon - traces.divergence_time);
    return ise(traces);
}

}  // namespace lfctune
