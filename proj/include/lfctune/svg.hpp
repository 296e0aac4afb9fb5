#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

// Minimal static SVG line charts for the response-curve figures. No external
// renderer; output is deterministic for identical inputs.

namespace lfctune {

struct SvgSeries {
    std::string label;
    const std::vector<double>* x = nullptr;
    const std::vector<double>* y = nullptr;
};

namespace detail {

inline std::string svg_num(double v) {
    std::ostringstream os;
    os.precision(8);
    os << v;
    return os.str();
}

inline std::string xml_escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            default: out += c;
        }
    }
    return out;
}

}  // namespace detail

// Renders overlaid line series with axes, tick labels and a legend.
inline std::string render_line_chart(const std::string& title, const std::string& x_label,
                                     const std::string& y_label,
                                     const std::vector<SvgSeries>& series) {
    if (series.empty()) throw std::invalid_argument("render_line_chart: no series");
    static const char* palette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                                    "#ff7f0e", "#8c564b"};
    const double width = 860, height = 500;
    const double ml = 90, mr = 30, mt = 50, mb = 60; // margins
    const double pw = width - ml - mr, ph = height - mt - mb;

    double xmin = 0, xmax = 1, ymin = 0, ymax = 1;
    bool first = true;
    for (const auto& s : series) {
        if (!s.x || !s.y || s.x->size() != s.y->size() || s.x->empty())
            throw std::invalid_argument("render_line_chart: malformed series");
        for (std::size_t i = 0; i < s.x->size(); ++i) {
            const double xv = (*s.x)[i], yv = (*s.y)[i];
            if (first) {
                xmin = xmax = xv;
                ymin = ymax = yv;
                first = false;
            }
            xmin = std::min(xmin, xv);
            xmax = std::max(xmax, xv);
            ymin = std::min(ymin, yv);
            ymax = std::max(ymax, yv);
        }
    }
    if (xmax <= xmin) xmax = xmin + 1;
    if (ymax <= ymin) {
        ymax = ymin + 1e-9;
        ymin -= 1e-9;
    }
    const double ypad = 0.05 * (ymax - ymin);
    ymin -= ypad;
    ymax += ypad;

    auto px = [&](double x) { return ml + (x - xmin) / (xmax - xmin) * pw; };
    auto py = [&](double y) { return mt + (ymax - y) / (ymax - ymin) * ph; };

    std::ostringstream out;
    out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\""
        << height << "\" viewBox=\"0 0 " << width << " " << height << "\">\n";
    out << "<rect width=\"" << width << "\" height=\"" << height << "\" fill=\"white\"/>\n";
    out << "<text x=\"" << width / 2 << "\" y=\"28\" text-anchor=\"middle\" "
           "font-family=\"sans-serif\" font-size=\"16\">"
        << detail::xml_escape(title) << "</text>\n";

    // axes and ticks
    out << "<g stroke=\"#404040\" stroke-width=\"1\" fill=\"none\">\n";
    out << "<path d=\"M" << ml << " " << mt << " L" << ml << " " << (mt + ph) << " L"
        << (ml + pw) << " " << (mt + ph) << "\"/>\n";
    out << "</g>\n";
    out << "<g font-family=\"sans-serif\" font-size=\"11\" fill=\"#202020\">\n";
    const int n_ticks = 5;
    for (int i = 0; i <= n_ticks; ++i) {
        const double fx = xmin + (xmax - xmin) * i / n_ticks;
        const double gx = px(fx);
        out << "<line x1=\"" << gx << "\" y1=\"" << (mt + ph) << "\" x2=\"" << gx << "\" y2=\""
            << (mt + ph + 5) << "\" stroke=\"#404040\"/>\n";
        out << "<text x=\"" << gx << "\" y=\"" << (mt + ph + 18)
            << "\" text-anchor=\"middle\">" << detail::svg_num(fx) << "</text>\n";
        const double fy = ymin + (ymax - ymin) * i / n_ticks;
        const double gy = py(fy);
        out << "<line x1=\"" << (ml - 5) << "\" y1=\"" << gy << "\" x2=\"" << ml << "\" y2=\""
            << gy << "\" stroke=\"#404040\"/>\n";
        out << "<text x=\"" << (ml - 8) << "\" y=\"" << (gy + 4)
            << "\" text-anchor=\"end\">" << detail::svg_num(fy) << "</text>\n";
    }
    out << "<text x=\"" << (ml + pw / 2) << "\" y=\"" << (height - 14)
        << "\" text-anchor=\"middle\" font-size=\"13\">" << detail::xml_escape(x_label)
        << "</text>\n";
    out << "<text x=\"20\" y=\"" << (mt + ph / 2)
        << "\" text-anchor=\"middle\" font-size=\"13\" transform=\"rotate(-90 20 "
        << (mt + ph / 2) << ")\">" << detail::xml_escape(y_label) << "</text>\n";
    out << "</g>\n";

    // series, downsampled to keep files small
    for (std::size_t si = 0; si < series.size(); ++si) {
        const auto& s = series[si];
        const char* color = palette[si % 6];
        const std::size_t n = s.x->size();
        const std::size_t stride = std::max<std::size_t>(1, n / 2000);
        out << "<polyline fill=\"none\" stroke=\"" << color
            << "\" stroke-width=\"1.5\" points=\"";
        for (std::size_t i = 0; i < n; i += stride) {
            out << detail::svg_num(px((*s.x)[i])) << ',' << detail::svg_num(py((*s.y)[i])) << ' ';
        }
        if ((n - 1) % stride != 0)
            out << detail::svg_num(px(s.x->back())) << ',' << detail::svg_num(py(s.y->back()));
        out << "\"/>\n";
    }

    // legend
    out << "<g font-family=\"sans-serif\" font-size=\"12\">\n";
    for (std::size_t si = 0; si < series.size(); ++si) {
        const double ly = mt + 8 + 18 * static_cast<double>(si);
        out << "<line x1=\"" << (ml + pw - 130) << "\" y1=\"" << ly << "\" x2=\""
            << (ml + pw - 105) << "\" y2=\"" << ly << "\" stroke=\"" << palette[si % 6]
            << "\" stroke-width=\"2\"/>\n";
        out << "<text x=\"" << (ml + pw - 98) << "\" y=\"" << (ly + 4) << "\">"
            << detail::xml_escape(series[si].label) << "</text>\n";
    }
    out << "</g>\n";
    out << "</svg>\n";
    return out.str();
}

}  // namespace lfctune
