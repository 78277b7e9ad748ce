#include "repopulse/render.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>

#include "repopulse/errors.hpp"
#include "repopulse/fsutil.hpp"
#include "repopulse/json_io.hpp"
#include "repopulse/timeutil.hpp"

namespace repopulse {

namespace fs = std::filesystem;

namespace {

bool valid_hex_color(std::string_view color) {
    if (color.size() == 7 && color[0] == '#') color.remove_prefix(1);
    if (color.size() != 6) return false;
    return std::all_of(color.begin(), color.end(), [](unsigned char c) {
        return std::isxdigit(c) != 0;
    });
}

std::string xml_escape(std::string_view text) {
    std::string out;
    out.reserve(text.size());
    for (const char c : text) {
        switch (c) {
        case '&': out += "&amp;"; break;
        case '<': out += "&lt;"; break;
        case '>': out += "&gt;"; break;
        case '"': out += "&quot;"; break;
        case '\'': out += "&apos;"; break;
        default: out.push_back(c);
        }
    }
    return out;
}

// Fixed two decimals with trailing zeros trimmed; keeps coordinates stable
// across runs without dragging in locale-dependent formatting.
std::string coord(double value) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.2f", value);
    std::string s(buf);
    if (s.find('.') != std::string::npos) {
        while (s.back() == '0') s.pop_back();
        if (s.back() == '.') s.pop_back();
    }
    if (s == "-0") s = "0";
    return s;
}

struct TickPlan {
    double step = 1.0;
    double first = 0.0;
    int count = 0;
    int decimals = 0;
};

TickPlan plan_ticks(double lo, double hi) {
    const double span = hi - lo;
    const double raw_step = span / 4.0; // at least four steps fit on the axis
    const double magnitude = std::pow(10.0, std::floor(std::log10(raw_step)));

    double step = magnitude;
    for (const double mult : {10.0, 5.0, 2.5, 2.0, 1.0}) {
        if (mult * magnitude <= raw_step) {
            step = mult * magnitude;
            break;
        }
    }

    TickPlan plan;
    plan.step = step;
    const double first_index = std::ceil(lo / step - 1e-9);
    const double last_index = std::floor(hi / step + 1e-9);
    plan.first = first_index * step;
    plan.count = static_cast<int>(last_index - first_index) + 1;

    const int base = std::max(0, -static_cast<int>(std::floor(std::log10(step) + 1e-9)));
    plan.decimals = base;
    const double scaled = step * std::pow(10.0, base);
    if (std::fabs(scaled - std::round(scaled)) > 1e-6) ++plan.decimals;
    return plan;
}

std::string tick_label(double value, int decimals) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.*f", decimals, value);
    std::string s(buf);
    if (s == "-0" || s == "-0.0" || s == "-0.00") s = s.substr(1);
    return s;
}

} // namespace

ChartStyle style_from_json(const nlohmann::json& doc) {
    if (!doc.is_object()) {
        throw PipelineError(ExitCode::invalid_style, "style document must be a JSON object");
    }
    ChartStyle style;
    for (const auto& [key, value] : doc.items()) {
        try {
            if (key == "width_px") {
                style.width_px = value.get<int>();
            } else if (key == "height_px") {
                style.height_px = value.get<int>();
            } else if (key == "line_color") {
                style.line_color = value.get<std::string>();
            } else if (key == "grid") {
                style.grid = value.get<bool>();
            } else if (key == "title") {
                style.title = value.get<std::string>();
            } else if (key == "x_label") {
                style.x_label = value.get<std::string>();
            } else if (key == "y_label") {
                style.y_label = value.get<std::string>();
            } else if (key == "font_family") {
                style.font_family = value.get<std::string>();
            } else {
                throw PipelineError(ExitCode::invalid_style, "unknown style key: " + key);
            }
        } catch (const nlohmann::json::exception&) {
            throw PipelineError(ExitCode::invalid_style, "bad value for style key: " + key);
        }
    }
    if (style.width_px <= 0 || style.height_px <= 0) {
        throw PipelineError(ExitCode::invalid_style, "chart dimensions must be positive");
    }
    if (!valid_hex_color(style.line_color)) {
        throw PipelineError(ExitCode::invalid_style, "line_color must be 6-digit hex");
    }
    if (style.line_color[0] != '#') style.line_color = "#" + style.line_color;
    return style;
}

ChartStyle load_style(const std::string& path) {
    const auto text = read_file(path);
    if (!text) {
        throw PipelineError(ExitCode::missing_input, "missing style file: " + path);
    }
    nlohmann::json doc = nlohmann::json::parse(*text, nullptr, false);
    if (doc.is_discarded()) {
        throw PipelineError(ExitCode::invalid_style, "style file is not valid JSON: " + path);
    }
    return style_from_json(doc);
}

std::string render_series(const MetricSeries& series, const IntervalGrid& grid,
                          const ChartStyle& style) {
    if (series.values.empty()) {
        throw PipelineError(ExitCode::empty_series,
                            "series " + std::string(to_string(series.name)) + " has no entries");
    }

    const int n = static_cast<int>(series.values.size());
    const double left = 70.0, right = 25.0, top = 45.0, bottom = 55.0;
    const double width = static_cast<double>(style.width_px);
    const double height = static_cast<double>(style.height_px);
    const double plot_w = width - left - right;
    const double plot_h = height - top - bottom;

    bool any_value = false;
    double vmin = 0.0, vmax = 0.0;
    for (const auto& v : series.values) {
        if (!v) continue;
        if (!any_value) {
            vmin = vmax = *v;
            any_value = true;
        } else {
            vmin = std::min(vmin, *v);
            vmax = std::max(vmax, *v);
        }
    }
    if (!any_value) {
        std::fprintf(stderr, "{\"event\":\"chart.no_data\",\"series\":\"%s\"}\n",
                     std::string(to_string(series.name)).c_str());
        vmin = 0.0;
        vmax = 1.0;
    }
    double ymin = std::min(0.0, vmin);
    double ymax = vmax;
    if (ymax == ymin) ymax = ymin + 1.0;

    const auto x_of = [&](int i) {
        if (n == 1) return left + plot_w / 2.0;
        return left + plot_w * static_cast<double>(i) / static_cast<double>(n - 1);
    };
    const auto y_of = [&](double v) {
        return top + plot_h - plot_h * (v - ymin) / (ymax - ymin);
    };

    const std::string title =
        style.title.empty()
            ? std::string(to_string(series.name)) + " (" + series.unit + ")"
            : style.title;
    const std::string y_label = style.y_label.empty() ? series.unit : style.y_label;
    const std::string x_label = style.x_label.empty() ? "date" : style.x_label;

    std::string svg;
    svg += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + std::to_string(style.width_px) +
           "\" height=\"" + std::to_string(style.height_px) + "\" viewBox=\"0 0 " +
           std::to_string(style.width_px) + " " + std::to_string(style.height_px) + "\">\n";
    svg += "<rect x=\"0\" y=\"0\" width=\"" + std::to_string(style.width_px) + "\" height=\"" +
           std::to_string(style.height_px) + "\" fill=\"#ffffff\"/>\n";
    svg += "<text x=\"" + coord(width / 2.0) + "\" y=\"24\" text-anchor=\"middle\" font-family=\"" +
           xml_escape(style.font_family) + "\" font-size=\"16\" fill=\"#222222\">" +
           xml_escape(title) + "</text>\n";

    // y ticks (and optional grid)
    const TickPlan ticks = plan_ticks(ymin, ymax);
    for (int i = 0; i < ticks.count; ++i) {
        const double v = ticks.first + ticks.step * static_cast<double>(i);
        const double y = y_of(v);
        if (style.grid) {
            svg += "<line x1=\"" + coord(left) + "\" y1=\"" + coord(y) + "\" x2=\"" +
                   coord(left + plot_w) + "\" y2=\"" + coord(y) +
                   "\" stroke=\"#dddddd\" stroke-width=\"1\"/>\n";
        }
        svg += "<line x1=\"" + coord(left - 4) + "\" y1=\"" + coord(y) + "\" x2=\"" + coord(left) +
               "\" y2=\"" + coord(y) + "\" stroke=\"#555555\" stroke-width=\"1\"/>\n";
        svg += "<text x=\"" + coord(left - 8) + "\" y=\"" + coord(y + 4) +
               "\" text-anchor=\"end\" font-family=\"" + xml_escape(style.font_family) +
               "\" font-size=\"11\" fill=\"#333333\">" + tick_label(v, ticks.decimals) +
               "</text>\n";
    }

    // x ticks: bucket start dates, at most eight labels
    const int label_step = std::max(1, (n + 7) / 8);
    for (int i = 0; i < n; i += label_step) {
        const double x = x_of(i);
        svg += "<line x1=\"" + coord(x) + "\" y1=\"" + coord(top + plot_h) + "\" x2=\"" + coord(x) +
               "\" y2=\"" + coord(top + plot_h + 4) + "\" stroke=\"#555555\" stroke-width=\"1\"/>\n";
        svg += "<text x=\"" + coord(x) + "\" y=\"" + coord(top + plot_h + 18) +
               "\" text-anchor=\"middle\" font-family=\"" + xml_escape(style.font_family) +
               "\" font-size=\"11\" fill=\"#333333\">" + format_utc_date(grid.bucket_start(i)) +
               "</text>\n";
    }

    // axes
    svg += "<line x1=\"" + coord(left) + "\" y1=\"" + coord(top) + "\" x2=\"" + coord(left) +
           "\" y2=\"" + coord(top + plot_h) + "\" stroke=\"#555555\" stroke-width=\"1\"/>\n";
    svg += "<line x1=\"" + coord(left) + "\" y1=\"" + coord(top + plot_h) + "\" x2=\"" +
           coord(left + plot_w) + "\" y2=\"" + coord(top + plot_h) +
           "\" stroke=\"#555555\" stroke-width=\"1\"/>\n";

    // axis labels
    svg += "<text x=\"" + coord(left + plot_w / 2.0) + "\" y=\"" + coord(height - 10) +
           "\" text-anchor=\"middle\" font-family=\"" + xml_escape(style.font_family) +
           "\" font-size=\"12\" fill=\"#333333\">" + xml_escape(x_label) + "</text>\n";
    svg += "<text x=\"16\" y=\"" + coord(top + plot_h / 2.0) +
           "\" text-anchor=\"middle\" font-family=\"" + xml_escape(style.font_family) +
           "\" font-size=\"12\" fill=\"#333333\" transform=\"rotate(-90 16 " +
           coord(top + plot_h / 2.0) + ")\">" + xml_escape(y_label) + "</text>\n";

    // data: one polyline per run of consecutive non-null values
    int i = 0;
    while (i < n) {
        if (!series.values[static_cast<std::size_t>(i)]) {
            ++i;
            continue;
        }
        std::string points;
        int j = i;
        while (j < n && series.values[static_cast<std::size_t>(j)]) {
            if (!points.empty()) points += " ";
            points += coord(x_of(j)) + "," + coord(y_of(*series.values[static_cast<std::size_t>(j)]));
            ++j;
        }
        svg += "<polyline fill=\"none\" stroke=\"" + style.line_color +
               "\" stroke-width=\"1.5\" points=\"" + points + "\"/>\n";
        i = j;
    }
    for (int k = 0; k < n; ++k) {
        const auto& v = series.values[static_cast<std::size_t>(k)];
        if (!v) continue;
        svg += "<circle cx=\"" + coord(x_of(k)) + "\" cy=\"" + coord(y_of(*v)) +
               "\" r=\"2.5\" fill=\"" + style.line_color + "\"/>\n";
    }

    if (!any_value) {
        svg += "<text x=\"" + coord(left + plot_w / 2.0) + "\" y=\"" +
               coord(top + plot_h / 2.0) + "\" text-anchor=\"middle\" font-family=\"" +
               xml_escape(style.font_family) + "\" font-size=\"14\" fill=\"#888888\">no data</text>\n";
    }

    svg += "</svg>\n";
    return svg;
}

std::vector<std::string> render_all(const std::string& metrics_path, const ChartStyle& style,
                                    const std::string& out_dir) {
    const MetricsFile metrics = read_metrics_file(metrics_path);
    const IntervalGrid grid = metrics.grid();
    ensure_directory(out_dir);

    std::vector<std::pair<std::string, std::string>> staged; // (tmp, final)
    std::vector<std::string> written;
    try {
        for (const MetricSeries& series : metrics.series) {
            const std::string name = std::string(to_string(series.name)) + ".svg";
            const std::string final_path = out_dir + "/" + name;
            const std::string tmp_path = final_path + ".tmp";
            atomic_write_file(tmp_path, render_series(series, grid, style));
            staged.emplace_back(tmp_path, final_path);
        }
        for (const auto& [tmp, final_path] : staged) {
            fs::rename(tmp, final_path);
            written.push_back(final_path);
        }
    } catch (...) {
        for (const auto& [tmp, final_path] : staged) {
            std::error_code ec;
            fs::remove(tmp, ec);
        }
        throw;
    }
    return written;
}

} // namespace repopulse
