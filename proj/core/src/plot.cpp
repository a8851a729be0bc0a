#include "ptpsim/plot.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>

namespace ptpsim {

namespace {

constexpr double kWidth = 800.0;
constexpr double kHeight = 420.0;
constexpr double kLeft = 90.0;
constexpr double kRight = 20.0;
constexpr double kTop = 40.0;
constexpr double kBottom = 50.0;

constexpr std::array<const char*, 6> kPalette = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b"};

std::string fmt(const char* spec, double v)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, spec, v);
    return buf;
}

std::string escape(const std::string& s)
{
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

double nice_step(double range, int target)
{
    if (range <= 0.0)
        return 1.0;
    const double raw = range / target;
    const double mag = std::pow(10.0, std::floor(std::log10(raw)));
    const double f = raw / mag;
    const double nice = f < 1.5 ? 1.0 : f < 3.0 ? 2.0 : f < 7.0 ? 5.0 : 10.0;
    return nice * mag;
}

struct Axis {
    double lo;
    double hi;
    double step;
};

Axis make_axis(double lo, double hi, int target)
{
    if (lo == hi) {
        lo -= 1.0;
        hi += 1.0;
    }
    const double step = nice_step(hi - lo, target);
    return {std::floor(lo / step) * step, std::ceil(hi / step) * step, step};
}

void write_text(const std::filesystem::path& path, const std::string& text)
{
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f)
        throw std::runtime_error("cannot open '" + path.string() + "' for writing");
    f << text;
    if (!f)
        throw std::runtime_error("write to '" + path.string() + "' failed");
}

}  // namespace

PlotSeries offset_series(const Trace& trace, Window window)
{
    PlotSeries s;
    s.label = trace.meta().name;
    for (const auto& r : trace.records()) {
        if (r.t_s < window.start_s || r.t_s > window.end_s)
            continue;
        s.t_s.push_back(r.t_s);
        s.value.push_back(r.actual_offset_ns);
    }
    if (s.t_s.empty())
        throw AnalysisError("plot window selects no records");
    return s;
}

std::string series_data(const PlotSeries& series)
{
    std::string out = "t_s,actual_offset_ns\n";
    for (std::size_t i = 0; i < series.t_s.size(); ++i)
        out += std::to_string(series.t_s[i]) + "," + std::to_string(series.value[i]) + "\n";
    return out;
}

std::string render_svg(const std::vector<PlotSeries>& series, const std::string& title)
{
    double x_lo = 0, x_hi = 0, y_lo = 0, y_hi = 0;
    bool first = true;
    for (const auto& s : series) {
        for (std::size_t i = 0; i < s.t_s.size(); ++i) {
            const double x = static_cast<double>(s.t_s[i]);
            const double y = static_cast<double>(s.value[i]);
            if (first) {
                x_lo = x_hi = x;
                y_lo = y_hi = y;
                first = false;
            }
            x_lo = std::min(x_lo, x);
            x_hi = std::max(x_hi, x);
            y_lo = std::min(y_lo, y);
            y_hi = std::max(y_hi, y);
        }
    }
    const Axis xa = make_axis(x_lo, x_hi, 8);
    const Axis ya = make_axis(y_lo, y_hi, 6);

    const double pw = kWidth - kLeft - kRight;
    const double ph = kHeight - kTop - kBottom;
    auto px = [&](double x) { return kLeft + (x - xa.lo) / (xa.hi - xa.lo) * pw; };
    auto py = [&](double y) { return kTop + (ya.hi - y) / (ya.hi - ya.lo) * ph; };

    std::string out;
    out += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"800\" height=\"420\" viewBox=\"0 0 800 420\" "
           "font-family=\"sans-serif\" font-size=\"12\">\n";
    out += "<rect width=\"800\" height=\"420\" fill=\"white\"/>\n";
    out += "<text x=\"400\" y=\"22\" text-anchor=\"middle\" font-size=\"15\">" + escape(title) + "</text>\n";

    // grid and tick labels
    out += "<g stroke=\"#dddddd\" stroke-width=\"1\">\n";
    for (double x = xa.lo; x <= xa.hi + xa.step / 2; x += xa.step)
        out += "<line x1=\"" + fmt("%.2f", px(x)) + "\" y1=\"" + fmt("%.2f", kTop) + "\" x2=\"" + fmt("%.2f", px(x)) +
               "\" y2=\"" + fmt("%.2f", kTop + ph) + "\"/>\n";
    for (double y = ya.lo; y <= ya.hi + ya.step / 2; y += ya.step)
        out += "<line x1=\"" + fmt("%.2f", kLeft) + "\" y1=\"" + fmt("%.2f", py(y)) + "\" x2=\"" +
               fmt("%.2f", kLeft + pw) + "\" y2=\"" + fmt("%.2f", py(y)) + "\"/>\n";
    out += "</g>\n";
    for (double x = xa.lo; x <= xa.hi + xa.step / 2; x += xa.step)
        out += "<text x=\"" + fmt("%.2f", px(x)) + "\" y=\"" + fmt("%.2f", kTop + ph + 16) +
               "\" text-anchor=\"middle\">" + fmt("%.0f", x) + "</text>\n";
    for (double y = ya.lo; y <= ya.hi + ya.step / 2; y += ya.step)
        out += "<text x=\"" + fmt("%.2f", kLeft - 6) + "\" y=\"" + fmt("%.2f", py(y) + 4) +
               "\" text-anchor=\"end\">" + fmt("%.0f", y) + "</text>\n";
    out += "<rect x=\"" + fmt("%.2f", kLeft) + "\" y=\"" + fmt("%.2f", kTop) + "\" width=\"" + fmt("%.2f", pw) +
           "\" height=\"" + fmt("%.2f", ph) + "\" fill=\"none\" stroke=\"black\"/>\n";
    out += "<text x=\"" + fmt("%.2f", kLeft + pw / 2) + "\" y=\"" + fmt("%.2f", kHeight - 10) +
           "\" text-anchor=\"middle\">t (s)</text>\n";
    out += "<text x=\"16\" y=\"" + fmt("%.2f", kTop + ph / 2) + "\" text-anchor=\"middle\" transform=\"rotate(-90 16 " +
           fmt("%.2f", kTop + ph / 2) + ")\">actual offset (ns)</text>\n";

    for (std::size_t k = 0; k < series.size(); ++k) {
        const auto& s = series[k];
        const char* color = kPalette[k % kPalette.size()];
        out += "<polyline fill=\"none\" stroke=\"" + std::string(color) + "\" stroke-width=\"1.5\" points=\"";
        for (std::size_t i = 0; i < s.t_s.size(); ++i) {
            if (i)
                out += ' ';
            out += fmt("%.2f", px(static_cast<double>(s.t_s[i]))) + "," +
                   fmt("%.2f", py(static_cast<double>(s.value[i])));
        }
        out += "\"/>\n";
        const double ly = kTop + 14 + 16 * static_cast<double>(k);
        out += "<line x1=\"" + fmt("%.2f", kLeft + 10) + "\" y1=\"" + fmt("%.2f", ly - 4) + "\" x2=\"" +
               fmt("%.2f", kLeft + 30) + "\" y2=\"" + fmt("%.2f", ly - 4) + "\" stroke=\"" + color +
               "\" stroke-width=\"2\"/>\n";
        out += "<text x=\"" + fmt("%.2f", kLeft + 36) + "\" y=\"" + fmt("%.2f", ly) + "\">" + escape(s.label) +
               "</text>\n";
    }
    out += "</svg>\n";
    return out;
}

std::vector<std::string> emit_plot_data(const Trace& trace, const std::string& dir, PlotFormat format,
                                        Window window)
{
    const PlotSeries s = offset_series(trace, window);
    std::filesystem::create_directories(dir);
    const std::filesystem::path base = std::filesystem::path(dir) / (trace.meta().name + "_offset");
    std::vector<std::string> written;
    if (format != PlotFormat::Svg) {
        const auto p = base.string() + ".csv";
        write_text(p, series_data(s));
        written.push_back(p);
    }
    if (format != PlotFormat::Data) {
        const auto p = base.string() + ".svg";
        write_text(p, render_svg({s}, trace.meta().name + ": actual offset"));
        written.push_back(p);
    }
    return written;
}

std::vector<std::string> emit_overlay(const std::vector<const Trace*>& traces, const std::string& dir,
                                      const std::string& stem, const std::string& title)
{
    if (traces.empty())
        throw AnalysisError("overlay needs at least one trace");
    std::vector<PlotSeries> series;
    std::string data = "scenario,t_s,actual_offset_ns\n";
    for (const Trace* t : traces) {
        series.push_back(offset_series(*t));
        const auto& s = series.back();
        for (std::size_t i = 0; i < s.t_s.size(); ++i)
            data += s.label + "," + std::to_string(s.t_s[i]) + "," + std::to_string(s.value[i]) + "\n";
    }
    std::filesystem::create_directories(dir);
    const std::filesystem::path base = std::filesystem::path(dir) / stem;
    write_text(base.string() + ".csv", data);
    write_text(base.string() + ".svg", render_svg(series, title));
    return {base.string() + ".csv", base.string() + ".svg"};
}

}  // namespace ptpsim
