#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ptpsim/telemetry.hpp"

namespace ptpsim {

enum class PlotFormat { Data, Svg, Both };

struct PlotSeries {
    std::string label;
    std::vector<std::int64_t> t_s;
    std::vector<std::int64_t> value;
};

/// actual_offset_ns against t_s for the records inside `window`. Throws
/// AnalysisError when the window selects nothing.
PlotSeries offset_series(const Trace& trace, Window window = {});

/// "t_s,actual_offset_ns" CSV body of a series.
std::string series_data(const PlotSeries& series);

/// Self-contained SVG line chart. Output depends only on the arguments.
std::string render_svg(const std::vector<PlotSeries>& series, const std::string& title);

/// Writes <dir>/<name>_offset.csv and/or <dir>/<name>_offset.svg and returns
/// the paths written.
std::vector<std::string> emit_plot_data(const Trace& trace, const std::string& dir, PlotFormat format,
                                        Window window = {});

/// One chart (and long-format data file) overlaying several traces, e.g. the
/// skew rates. Writes <dir>/<stem>.csv and <dir>/<stem>.svg.
std::vector<std::string> emit_overlay(const std::vector<const Trace*>& traces, const std::string& dir,
                                      const std::string& stem, const std::string& title);

}  // namespace ptpsim
