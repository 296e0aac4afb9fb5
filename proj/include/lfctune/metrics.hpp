#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "lfctune/simulator.hpp"

// Step-response quantities used for the method comparison: peak overshoot,
// peak undershoot and settling time of the frequency deviation traces.

namespace lfctune {

struct ResponseMetrics {
    double peak_overshoot = 0.0;  // Hz
    double peak_undershoot = 0.0; // Hz, magnitude of the deepest dip
    std::optional<double> settling_time; // s; empty = never settles
    double steady_state_value = 0.0;     // final recorded sample, Hz
};

namespace detail {

inline void require_finite(const std::vector<double>& series, const char* who) {
    for (double v : series)
        if (!std::isfinite(v)) throw std::invalid_argument(std::string(who) + ": non-finite sample");
}

}  // namespace detail

inline double peak_undershoot(const std::vector<double>& series) {
    if (series.empty()) throw std::invalid_argument("peak_undershoot: empty series");
    detail::require_finite(series, "peak_undershoot");
    double lowest = series.front();
    for (double v : series) lowest = std::min(lowest, v);
    return std::max(0.0, -lowest);
}

inline double peak_overshoot(const std::vector<double>& series) {
    if (series.empty()) throw std::invalid_argument("peak_overshoot: empty series");
    detail::require_finite(series, "peak_overshoot");
    double highest = series.front();
    for (double v : series) highest = std::max(highest, v);
    return std::max(0.0, highest);
}

// Earliest time after which the series stays inside [-band, +band] for the
// rest of the record. Empty when the final sample is still outside.
inline std::optional<double> settling_time(const std::vector<double>& series,
                                           const std::vector<double>& times, double band) {
    if (series.empty() || series.size() != times.size())
        throw std::invalid_argument("settling_time: series/times mismatch");
    if (!(band > 0.0)) throw std::invalid_argument("settling_time: band must be > 0");
    detail::require_finite(series, "settling_time");
    std::size_t last_violation = series.size(); // sentinel: none
    for (std::size_t i = series.size(); i-- > 0;) {
        if (std::abs(series[i]) > band) {
            last_violation = i;
            break;
        }
    }
    if (last_violation == series.size()) return times.front();
    if (last_violation + 1 == series.size()) return std::nullopt;
    return times[last_violation + 1];
}

inline ResponseMetrics response_metrics(const std::vector<double>& series,
                                        const std::vector<double>& times, double band) {
    ResponseMetrics m;
    m.peak_overshoot = peak_overshoot(series);
    m.peak_undershoot = peak_undershoot(series);
    m.settling_time = settling_time(series, times, band);
    m.steady_state_value = series.back();
    return m;
}

// The paper never defines the settling band; +-0.0005 Hz absolute is small
// relative to the reported undershoots and is the configurable default.
inline constexpr double kDefaultSettlingBand = 0.0005;

struct LabeledTraces {
    std::string label;
    const TraceSet* traces = nullptr;
};

struct ComparisonReport {
    std::vector<std::string> methods;
    std::size_t n_areas = 0;
    double band = kDefaultSettlingBand;
    std::vector<std::vector<double>> undershoot; // [method][area], Hz
    std::vector<std::vector<double>> overshoot;  // [method][area], Hz
    std::vector<std::vector<std::optional<double>>> settling; // [method][area], s

    std::string to_text() const;
    std::string to_csv() const;
};

namespace detail {

inline std::string roman(std::size_t n) {
    static const char* names[] = {"I", "II", "III", "IV", "V", "VI", "VII", "VIII", "IX", "X"};
    if (n >= 1 && n <= 10) return names[n - 1];
    return std::to_string(n);
}

inline std::string format_value(double v) {
    std::ostringstream os;
    os.precision(6);
    os << v;
    return os.str();
}

inline std::string format_settling(const std::optional<double>& v) {
    return v ? format_value(*v) : std::string("—");
}

}  // namespace detail

// Builds the undershoot/overshoot/settling tables (methods as rows, areas as
// columns) from runs of the same scenario. Runs must share the sampling grid
// and network shape.
inline ComparisonReport comparison_report(const std::vector<LabeledTraces>& runs,
                                          double band = kDefaultSettlingBand) {
    if (runs.empty()) throw std::invalid_argument("comparison_report: no runs");
    const TraceSet& first = *runs.front().traces;
    for (const auto& run : runs) {
        const TraceSet& t = *run.traces;
        if (t.times != first.times || t.delta_f.size() != first.delta_f.size() ||
            t.tie_pairs != first.tie_pairs)
            throw std::invalid_argument("comparison_report: runs come from different scenarios");
    }
    ComparisonReport rep;
    rep.n_areas = first.delta_f.size();
    rep.band = band;
    for (const auto& run : runs) {
        rep.methods.push_back(run.label);
        std::vector<double> us, os;
        std::vector<std::optional<double>> st;
        for (std::size_t i = 0; i < rep.n_areas; ++i) {
            const auto& series = run.traces->delta_f[i];
            us.push_back(peak_undershoot(series));
            os.push_back(peak_overshoot(series));
            st.push_back(settling_time(series, run.traces->times, band));
        }
        rep.undershoot.push_back(std::move(us));
        rep.overshoot.push_back(std::move(os));
        rep.settling.push_back(std::move(st));
    }
    return rep;
}

inline std::string ComparisonReport::to_text() const {
    std::ostringstream out;
    std::size_t label_w = 6; // "Method"
    for (const auto& m : methods) label_w = std::max(label_w, m.size());
    auto pad = [](const std::string& s, std::size_t w) {
        return s + std::string(s.size() < w ? w - s.size() : 0, ' ');
    };
    auto table = [&](const std::string& title, auto value_at) {
        out << title << "\n";
        out << "  " << pad("Method", label_w);
        for (std::size_t a = 0; a < n_areas; ++a) out << "  " << pad("Area " + detail::roman(a + 1), 12);
        out << "\n";
        for (std::size_t m = 0; m < methods.size(); ++m) {
            out << "  " << pad(methods[m], label_w);
            for (std::size_t a = 0; a < n_areas; ++a) out << "  " << pad(value_at(m, a), 12);
            out << "\n";
        }
        out << "\n";
    };
    table("Peak undershoot (Hz)",
          [&](std::size_t m, std::size_t a) { return detail::format_value(undershoot[m][a]); });
    table("Peak overshoot (Hz)",
          [&](std::size_t m, std::size_t a) { return detail::format_value(overshoot[m][a]); });
    table("Settling time (s), band +-" + detail::format_value(band) + " Hz",
          [&](std::size_t m, std::size_t a) { return detail::format_settling(settling[m][a]); });
    return out.str();
}

inline std::string ComparisonReport::to_csv() const {
    std::ostringstream out;
    out << "metric,method,area,value\n";
    auto rows = [&](const char* metric, auto value_at) {
        for (std::size_t m = 0; m < methods.size(); ++m)
            for (std::size_t a = 0; a < n_areas; ++a)
                out << metric << ',' << methods[m] << ',' << (a + 1) << ',' << value_at(m, a)
                    << "\n";
    };
    rows("peak_undershoot_hz",
         [&](std::size_t m, std::size_t a) { return detail::format_value(undershoot[m][a]); });
    rows("peak_overshoot_hz",
         [&](std::size_t m, std::size_t a) { return detail::format_value(overshoot[m][a]); });
    rows("settling_time_s",
         [&](std::size_t m, std::size_t a) { return detail::format_settling(settling[m][a]); });
    return out.str();
}

}  // namespace lfctune
