#pragma once

// Static SVG plots: spike raster (time x neuron index) and a membrane
// potential heat map (one row per probed neuron).

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdio>
#include <sstream>
#include <string>

#include "bump/csv_io.hpp"
#include "bump/record.hpp"

namespace bump {

struct PlotFrame {
    double width = 900.0;
    double height = 520.0;
    double margin_left = 70.0;
    double margin_right = 20.0;
    double margin_top = 30.0;
    double margin_bottom = 60.0;

    double plot_width() const { return width - margin_left - margin_right; }
    double plot_height() const { return height - margin_top - margin_bottom; }
};

namespace detail {

inline std::string fmt2(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return buf;
}

inline double nice_step(double span, int target_ticks) {
    const double raw = span / std::max(1, target_ticks);
    const double mag = std::pow(10.0, std::floor(std::log10(raw)));
    for (double m : {1.0, 2.0, 5.0, 10.0}) {
        if (m * mag >= raw) {
            return m * mag;
        }
    }
    return 10.0 * mag;
}

inline void svg_open(std::ostringstream& out, const PlotFrame& f, const std::string& title) {
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << fmt2(f.width) << "\" height=\""
        << fmt2(f.height) << "\" viewBox=\"0 0 " << fmt2(f.width) << ' ' << fmt2(f.height) << "\">\n"
        << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
        << "<text x=\"" << fmt2(f.width / 2) << "\" y=\"20\" text-anchor=\"middle\" font-family=\"sans-serif\" "
        << "font-size=\"14\">" << title << "</text>\n";
}

/// Frame, ticks and labels. x runs over [0, x_max], y over [0, y_max] bottom-up.
inline void svg_axes(std::ostringstream& out, const PlotFrame& f, double x_max, double y_max,
                     const std::string& x_label, const std::string& y_label) {
    const double x0 = f.margin_left;
    const double y0 = f.margin_top + f.plot_height();
    out << "<g class=\"axes\" stroke=\"black\" fill=\"none\" stroke-width=\"1\">\n"
        << "<rect x=\"" << fmt2(x0) << "\" y=\"" << fmt2(f.margin_top) << "\" width=\"" << fmt2(f.plot_width())
        << "\" height=\"" << fmt2(f.plot_height()) << "\"/>\n";
    const double xs = nice_step(x_max, 6);
    for (double t = 0.0; t <= x_max + 1e-9; t += xs) {
        const double x = x0 + t / x_max * f.plot_width();
        out << "<line x1=\"" << fmt2(x) << "\" y1=\"" << fmt2(y0) << "\" x2=\"" << fmt2(x) << "\" y2=\""
            << fmt2(y0 + 5) << "\"/>\n";
    }
    const double ys = nice_step(y_max, 5);
    for (double v = 0.0; v <= y_max + 1e-9; v += ys) {
        const double y = y0 - v / y_max * f.plot_height();
        out << "<line x1=\"" << fmt2(x0 - 5) << "\" y1=\"" << fmt2(y) << "\" x2=\"" << fmt2(x0) << "\" y2=\""
            << fmt2(y) << "\"/>\n";
    }
    out << "</g>\n<g class=\"labels\" font-family=\"sans-serif\" font-size=\"11\" fill=\"black\">\n";
    for (double t = 0.0; t <= x_max + 1e-9; t += xs) {
        out << "<text x=\"" << fmt2(x0 + t / x_max * f.plot_width()) << "\" y=\"" << fmt2(y0 + 18)
            << "\" text-anchor=\"middle\">" << format_number(t) << "</text>\n";
    }
    for (double v = 0.0; v <= y_max + 1e-9; v += ys) {
        out << "<text x=\"" << fmt2(x0 - 8) << "\" y=\"" << fmt2(y0 - v / y_max * f.plot_height() + 4)
            << "\" text-anchor=\"end\">" << format_number(v) << "</text>\n";
    }
    out << "<text x=\"" << fmt2(x0 + f.plot_width() / 2) << "\" y=\"" << fmt2(f.height - 15)
        << "\" text-anchor=\"middle\">" << x_label << "</text>\n"
        << "<text x=\"18\" y=\"" << fmt2(f.margin_top + f.plot_height() / 2)
        << "\" text-anchor=\"middle\" transform=\"rotate(-90 18 " << fmt2(f.margin_top + f.plot_height() / 2)
        << ")\">" << y_label << "</text>\n</g>\n";
}

} // namespace detail

/// One mark per spike.
inline std::string render_raster_svg(const SimulationRecord& rec, const PlotFrame& f = {}) {
    std::ostringstream out;
    const double t_max = rec.duration_ms > 0.0 ? rec.duration_ms : 1.0;
    const double n = static_cast<double>(std::max<std::size_t>(rec.n, 1));
    detail::svg_open(out, f, "spike raster");
    detail::svg_axes(out, f, t_max, n, "time (ms)", "neuron index");
    const double mark_w = std::max(1.0, f.plot_width() * rec.dt_ms / t_max);
    const double mark_h = std::max(1.0, f.plot_height() / n);
    out << "<g class=\"spikes\" fill=\"black\">\n";
    for (const auto& s : rec.raster) {
        const double x = f.margin_left + s.time_ms / t_max * f.plot_width();
        const double y = f.margin_top + f.plot_height() - (static_cast<double>(s.neuron) + 1.0) / n * f.plot_height();
        out << "<rect class=\"spike\" x=\"" << detail::fmt2(x) << "\" y=\"" << detail::fmt2(y) << "\" width=\""
            << detail::fmt2(mark_w) << "\" height=\"" << detail::fmt2(mark_h) << "\"/>\n";
    }
    out << "</g>\n</svg>\n";
    return out.str();
}

/// Blue (v_min) to red (v_max), clamped.
inline std::string heat_colour(double v, double v_min, double v_max) {
    const double u = std::clamp(v_max > v_min ? (v - v_min) / (v_max - v_min) : 0.5, 0.0, 1.0);
    const int r = static_cast<int>(std::lround(255.0 * u));
    const int g = static_cast<int>(std::lround(255.0 * (1.0 - std::abs(2.0 * u - 1.0)) * 0.8));
    const int b = static_cast<int>(std::lround(255.0 * (1.0 - u)));
    char buf[8];
    std::snprintf(buf, sizeof buf, "#%02x%02x%02x", r, g, b);
    return buf;
}

/// One row group per probe, one cell per sample.
inline std::string render_voltage_svg(const VoltageTable& table, double v_min = -70.0, double v_max = -48.0,
                                      const PlotFrame& f = {}) {
    std::ostringstream out;
    const std::size_t samples = table.times_ms.size();
    const double dt = samples > 1 ? table.times_ms[1] - table.times_ms[0] : 1.0;
    const double t_max = samples ? table.times_ms.back() + dt : 1.0;
    const double rows = static_cast<double>(std::max<std::size_t>(table.probes.size(), 1));
    detail::svg_open(out, f, "membrane potential (mV)");
    const double cell_w = f.plot_width() / std::max<double>(1.0, static_cast<double>(samples));
    const double cell_h = f.plot_height() / rows;
    out << "<g class=\"heatmap\" shape-rendering=\"crispEdges\">\n";
    for (std::size_t k = 0; k < table.probes.size(); ++k) {
        const double y = f.margin_top + f.plot_height() - (static_cast<double>(k) + 1.0) * cell_h;
        out << "<g class=\"row\" data-probe=\"" << table.probes[k] << "\">\n";
        for (std::size_t s = 0; s < samples; ++s) {
            out << "<rect x=\"" << detail::fmt2(f.margin_left + static_cast<double>(s) * cell_w) << "\" y=\""
                << detail::fmt2(y) << "\" width=\"" << detail::fmt2(cell_w) << "\" height=\""
                << detail::fmt2(cell_h) << "\" fill=\"" << heat_colour(table.traces[k][s], v_min, v_max)
                << "\"/>\n";
        }
        out << "</g>\n";
    }
    out << "</g>\n";
    detail::svg_axes(out, f, t_max, rows, "time (ms)", "probe row");
    out << "</svg>\n";
    return out.str();
}

} // namespace bump
