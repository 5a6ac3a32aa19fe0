#ifndef MEDOIDLP_SVG_HPP
#define MEDOIDLP_SVG_HPP

#include <string>
#include <vector>

namespace medoidlp {

/// One polyline of a line chart.
struct ChartSeries {
    std::string label;
    std::vector<double> x;
    std::vector<double> y;
};

/// Minimal deterministic line-chart renderer: fixed canvas, fixed 2-decimal
/// coordinate formatting, no timestamps; identical input gives identical
/// bytes.
struct LineChart {
    std::string title;
    std::string x_label;
    std::string y_label;
    std::vector<ChartSeries> series;
    double y_min_hint = 0.0; // y axis always includes this value

    std::string render() const;
};

} // namespace medoidlp

#endif
