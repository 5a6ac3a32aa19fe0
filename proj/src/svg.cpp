#include "medoidlp/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace medoidlp {

namespace {

// Canvas geometry (pixels).
constexpr double kWidth = 640.0;
constexpr double kHeight = 420.0;
constexpr double kLeft = 64.0;
constexpr double kRight = 150.0; // room for the legend
constexpr double kTop = 40.0;
constexpr double kBottom = 52.0;

const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                          "#ff7f0e", "#8c564b", "#17becf", "#7f7f7f"};

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.2f", v);
    return buf;
}

std::string escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            default: out += c;
        }
    }
    return out;
}

/// Round-ish tick step covering the span with at most ~6 ticks.
double tick_step(double span) {
    if (span <= 0.0) return 1.0;
    double raw = span / 5.0;
    double mag = std::pow(10.0, std::floor(std::log10(raw)));
    for (double m : {1.0, 2.0, 5.0, 10.0})
        if (raw <= m * mag) return m * mag;
    return 10.0 * mag;
}

} // namespace

std::string LineChart::render() const {
    if (series.empty()) throw std::invalid_argument("chart needs at least one series");
    double xmin = 1e300, xmax = -1e300, ymin = y_min_hint, ymax = -1e300;
    for (const auto& s : series) {
        if (s.x.size() != s.y.size()) throw std::invalid_argument("series length mismatch");
        for (double v : s.x) {
            xmin = std::min(xmin, v);
            xmax = std::max(xmax, v);
        }
        for (double v : s.y) {
            ymin = std::min(ymin, v);
            ymax = std::max(ymax, v);
        }
    }
    if (xmax <= xmin) xmax = xmin + 1.0;
    if (ymax <= ymin) ymax = ymin + 1.0;

    double plot_w = kWidth - kLeft - kRight;
    double plot_h = kHeight - kTop - kBottom;
    auto px = [&](double x) { return kLeft + (x - xmin) / (xmax - xmin) * plot_w; };
    auto py = [&](double y) { return kTop + plot_h - (y - ymin) / (ymax - ymin) * plot_h; };

    std::string out;
    out += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + fmt(kWidth) +
           "\" height=\"" + fmt(kHeight) + "\" viewBox=\"0 0 " + fmt(kWidth) + " " +
           fmt(kHeight) + "\">\n";
    out += "<rect x=\"0\" y=\"0\" width=\"" + fmt(kWidth) + "\" height=\"" + fmt(kHeight) +
           "\" fill=\"white\"/>\n";
    out += "<text x=\"" + fmt(kLeft + plot_w / 2) +
           "\" y=\"22\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"14\">" +
           escape(title) + "</text>\n";

    // axes
    out += "<line x1=\"" + fmt(kLeft) + "\" y1=\"" + fmt(kTop) + "\" x2=\"" + fmt(kLeft) +
           "\" y2=\"" + fmt(kTop + plot_h) + "\" stroke=\"black\"/>\n";
    out += "<line x1=\"" + fmt(kLeft) + "\" y1=\"" + fmt(kTop + plot_h) + "\" x2=\"" +
           fmt(kLeft + plot_w) + "\" y2=\"" + fmt(kTop + plot_h) + "\" stroke=\"black\"/>\n";

    double xs = tick_step(xmax - xmin);
    for (double t = std::ceil(xmin / xs) * xs; t <= xmax + 1e-9; t += xs) {
        out += "<line x1=\"" + fmt(px(t)) + "\" y1=\"" + fmt(kTop + plot_h) + "\" x2=\"" +
               fmt(px(t)) + "\" y2=\"" + fmt(kTop + plot_h + 4) + "\" stroke=\"black\"/>\n";
        out += "<text x=\"" + fmt(px(t)) + "\" y=\"" + fmt(kTop + plot_h + 18) +
               "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">" +
               fmt(t) + "</text>\n";
    }
    double ys = tick_step(ymax - ymin);
    for (double t = std::ceil(ymin / ys) * ys; t <= ymax + 1e-9; t += ys) {
        out += "<line x1=\"" + fmt(kLeft - 4) + "\" y1=\"" + fmt(py(t)) + "\" x2=\"" + fmt(kLeft) +
               "\" y2=\"" + fmt(py(t)) + "\" stroke=\"black\"/>\n";
        out += "<text x=\"" + fmt(kLeft - 8) + "\" y=\"" + fmt(py(t) + 4) +
               "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">" + fmt(t) +
               "</text>\n";
    }
    out += "<text x=\"" + fmt(kLeft + plot_w / 2) + "\" y=\"" + fmt(kHeight - 12) +
           "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\">" +
           escape(x_label) + "</text>\n";
    out += "<text x=\"16\" y=\"" + fmt(kTop + plot_h / 2) +
           "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\" transform=\"rotate(-90 16 " +
           fmt(kTop + plot_h / 2) + ")\">" + escape(y_label) + "</text>\n";

    for (std::size_t s = 0; s < series.size(); ++s) {
        const char* color = kPalette[s % (sizeof(kPalette) / sizeof(kPalette[0]))];
        std::string pts;
        for (std::size_t t = 0; t < series[s].x.size(); ++t) {
            if (t) pts += ' ';
            pts += fmt(px(series[s].x[t])) + "," + fmt(py(series[s].y[t]));
        }
        out += "<polyline fill=\"none\" stroke=\"";
        out += color;
        out += "\" stroke-width=\"1.5\" points=\"" + pts + "\"/>\n";
        for (std::size_t t = 0; t < series[s].x.size(); ++t)
            out += "<circle cx=\"" + fmt(px(series[s].x[t])) + "\" cy=\"" +
                   fmt(py(series[s].y[t])) + "\" r=\"2.5\" fill=\"" + color + "\"/>\n";
        double ly = kTop + 14.0 * s;
        out += "<line x1=\"" + fmt(kLeft + plot_w + 12) + "\" y1=\"" + fmt(ly) + "\" x2=\"" +
               fmt(kLeft + plot_w + 32) + "\" y2=\"" + fmt(ly) + "\" stroke=\"" + color +
               "\" stroke-width=\"1.5\"/>\n";
        out += "<text x=\"" + fmt(kLeft + plot_w + 38) + "\" y=\"" + fmt(ly + 4) +
               "\" font-family=\"sans-serif\" font-size=\"11\">" + escape(series[s].label) +
               "</text>\n";
    }
    out += "</svg>\n";
    return out;
}

} // namespace medoidlp
