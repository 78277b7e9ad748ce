#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "repopulse/metrics.hpp"

namespace repopulse {

struct ChartStyle {
    int width_px = 900;
    int height_px = 450;
    std::string line_color = "#2b6cb0"; // "#rrggbb"
    bool grid = true;
    std::string title;   // empty = derived from the series name
    std::string x_label; // empty = "date"
    std::string y_label; // empty = the series unit
    std::string font_family = "Helvetica, Arial, sans-serif";
};

// Flat JSON of ChartStyle fields; unknown keys are rejected (invalid_style),
// as are non-positive dimensions and colors that are not 6-digit hex.
ChartStyle style_from_json(const nlohmann::json& doc);
ChartStyle load_style(const std::string& path);

// Standalone SVG document. X axis: bucket start dates (UTC). Y axis:
// [min(0, min value), max value] with at least 4 ticks. Null values split
// the line into disjoint segments; an all-null series still renders axes
// plus a "no data" annotation. Identical inputs give identical bytes.
// Throws empty_series when the series has no entries.
std::string render_series(const MetricSeries& series, const IntervalGrid& grid,
                          const ChartStyle& style);

// One "<series>.svg" per series in the metrics file; returns the file names
// written. Files appear atomically, and nothing is left behind on failure.
std::vector<std::string> render_all(const std::string& metrics_path, const ChartStyle& style,
                                    const std::string& out_dir);

} // namespace repopulse
