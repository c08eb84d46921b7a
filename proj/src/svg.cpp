#include "ergopt/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

namespace ergopt {

namespace {

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return buf;
}

std::string xml_escape(const std::string& s) {
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

}  // namespace

std::string SvgPlot::render(int width, int height) const {
    const double ml = 70, mr = 20, mt = 34, mb = 48;
    const double pw = width - ml - mr, ph = height - mt - mb;

    auto tx = [&](double v) { return log_x ? std::log10(v) : v; };
    auto ty = [&](double v) { return log_y ? std::log10(v) : v; };

    double x0 = std::numeric_limits<double>::infinity(), x1 = -x0;
    double y0 = x0, y1 = -x0;
    for (const auto& s : series) {
        for (const auto& [x, y] : s.points) {
            if (log_x && x <= 0) continue;
            if (log_y && y <= 0) continue;
            x0 = std::min(x0, tx(x));
            x1 = std::max(x1, tx(x));
            y0 = std::min(y0, ty(y));
            y1 = std::max(y1, ty(y));
        }
    }
    for (const auto& [y, label] : h_lines) {
        (void)label;
        if (log_y && y <= 0) continue;
        y0 = std::min(y0, ty(y));
        y1 = std::max(y1, ty(y));
    }
    if (!(x0 < x1)) { x0 -= 0.5; x1 += 0.5; }
    if (!(y0 < y1)) { y0 -= 0.5; y1 += 0.5; }
    const double xpad = 0.05 * (x1 - x0), ypad = 0.08 * (y1 - y0);
    x0 -= xpad; x1 += xpad; y0 -= ypad; y1 += ypad;

    auto px = [&](double v) { return ml + (tx(v) - x0) / (x1 - x0) * pw; };
    auto py = [&](double v) { return mt + ph - (ty(v) - y0) / (y1 - y0) * ph; };

    std::ostringstream svg;
    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\""
        << height << "\" viewBox=\"0 0 " << width << ' ' << height << "\">\n";
    svg << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    svg << "<text x=\"" << width / 2 << "\" y=\"20\" text-anchor=\"middle\" font-size=\"14\">"
        << xml_escape(title) << "</text>\n";

    // axes box and ticks
    svg << "<rect x=\"" << ml << "\" y=\"" << mt << "\" width=\"" << pw << "\" height=\"" << ph
        << "\" fill=\"none\" stroke=\"#444\"/>\n";
    const int ticks = 5;
    for (int i = 0; i <= ticks; ++i) {
        const double fx = x0 + (x1 - x0) * i / ticks;
        const double fy = y0 + (y1 - y0) * i / ticks;
        const double gx = ml + pw * i / ticks;
        const double gy = mt + ph - ph * i / ticks;
        const double vx = log_x ? std::pow(10.0, fx) : fx;
        const double vy = log_y ? std::pow(10.0, fy) : fy;
        svg << "<line x1=\"" << gx << "\" y1=\"" << mt + ph << "\" x2=\"" << gx << "\" y2=\""
            << mt + ph + 4 << "\" stroke=\"#444\"/>\n";
        svg << "<text x=\"" << gx << "\" y=\"" << mt + ph + 16
            << "\" text-anchor=\"middle\" font-size=\"10\">" << fmt(vx) << "</text>\n";
        svg << "<line x1=\"" << ml - 4 << "\" y1=\"" << gy << "\" x2=\"" << ml << "\" y2=\"" << gy
            << "\" stroke=\"#444\"/>\n";
        svg << "<text x=\"" << ml - 6 << "\" y=\"" << gy + 3
            << "\" text-anchor=\"end\" font-size=\"10\">" << fmt(vy) << "</text>\n";
    }
    svg << "<text x=\"" << ml + pw / 2 << "\" y=\"" << height - 8
        << "\" text-anchor=\"middle\" font-size=\"12\">" << xml_escape(x_label) << "</text>\n";
    svg << "<text x=\"14\" y=\"" << mt + ph / 2
        << "\" text-anchor=\"middle\" font-size=\"12\" transform=\"rotate(-90 14 " << mt + ph / 2
        << ")\">" << xml_escape(y_label) << "</text>\n";

    for (const auto& [y, label] : h_lines) {
        if (log_y && y <= 0) continue;
        svg << "<line x1=\"" << ml << "\" y1=\"" << py(y) << "\" x2=\"" << ml + pw << "\" y2=\""
            << py(y) << "\" stroke=\"#999\" stroke-dasharray=\"5,4\"/>\n";
        svg << "<text x=\"" << ml + pw - 4 << "\" y=\"" << py(y) - 4
            << "\" text-anchor=\"end\" font-size=\"10\" fill=\"#666\">" << xml_escape(label)
            << "</text>\n";
    }

    int legend_y = static_cast<int>(mt) + 14;
    for (const auto& s : series) {
        std::vector<std::pair<double, double>> drawable;
        for (const auto& [x, y] : s.points) {
            if (log_x && x <= 0) continue;
            if (log_y && y <= 0) continue;
            drawable.emplace_back(x, y);
        }
        if (s.line && drawable.size() > 1) {
            svg << "<polyline fill=\"none\" stroke=\"" << s.color << "\" stroke-width=\"1.5\" points=\"";
            for (const auto& [x, y] : drawable) svg << fmt(px(x)) << ',' << fmt(py(y)) << ' ';
            svg << "\"/>\n";
        }
        for (const auto& [x, y] : drawable)
            svg << "<circle cx=\"" << fmt(px(x)) << "\" cy=\"" << fmt(py(y))
                << "\" r=\"3\" fill=\"" << s.color << "\"/>\n";
        if (!s.label.empty()) {
            svg << "<circle cx=\"" << ml + pw - 120 << "\" cy=\"" << legend_y - 4
                << "\" r=\"3\" fill=\"" << s.color << "\"/>\n";
            svg << "<text x=\"" << ml + pw - 112 << "\" y=\"" << legend_y
                << "\" font-size=\"11\">" << xml_escape(s.label) << "</text>\n";
            legend_y += 16;
        }
    }
    svg << "</svg>\n";
    return svg.str();
}

}  // namespace ergopt
