#pragma once

#include <string>
#include <vector>

namespace ergopt {

/// Minimal static SVG plot: one or more point series drawn as polyline plus
/// markers, optional horizontal reference lines, optional log scaling per
/// axis. Enough for error-vs-epsilon curves and cluster plots; not a
/// charting library.
struct SvgPlot {
    struct Series {
        std::string label;
        std::string color = "#1f77b4";
        bool line = true;
        std::vector<std::pair<double, double>> points;
    };

    std::string title;
    std::string x_label;
    std::string y_label;
    bool log_x = false;
    bool log_y = false;
    std::vector<Series> series;
    std::vector<std::pair<double, std::string>> h_lines;  // y value, label

    std::string render(int width = 640, int height = 420) const;
};

}  // namespace ergopt
