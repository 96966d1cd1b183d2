// svg.hpp — minimal self-contained SVG renderings of study results:
// heatmaps (with negative regions masked), grouped bars, and histograms.
// Purely a view of stored data; no external assets.

#pragma once

#include <algorithm>
#include <cmath>
#include <sstream>
#include <string>
#include <vector>

#include "gslide/csv.hpp"

namespace gslide {

namespace detail {

class SvgCanvas {
  public:
    SvgCanvas(int width, int height) : width_(width), height_(height) {}

    void rect(double x, double y, double w, double h, const std::string& fill,
              const std::string& stroke = "none") {
        body_ << "<rect x=\"" << x << "\" y=\"" << y << "\" width=\"" << w
              << "\" height=\"" << h << "\" fill=\"" << fill << "\" stroke=\"" << stroke
              << "\"/>\n";
    }

    void text(double x, double y, const std::string& s, int size = 11,
              const std::string& anchor = "start") {
        body_ << "<text x=\"" << x << "\" y=\"" << y << "\" font-size=\"" << size
              << "\" font-family=\"sans-serif\" text-anchor=\"" << anchor << "\">" << s
              << "</text>\n";
    }

    void line(double x1, double y1, double x2, double y2, const std::string& stroke) {
        body_ << "<line x1=\"" << x1 << "\" y1=\"" << y1 << "\" x2=\"" << x2 << "\" y2=\""
              << y2 << "\" stroke=\"" << stroke << "\"/>\n";
    }

    std::string str() const {
        std::ostringstream out;
        out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width_
            << "\" height=\"" << height_ << "\">\n<rect width=\"" << width_
            << "\" height=\"" << height_ << "\" fill=\"white\"/>\n"
            << body_.str() << "</svg>\n";
        return out.str();
    }

  private:
    int width_, height_;
    std::ostringstream body_;
};

// dark blue -> yellow ramp over t in [0, 1]
inline std::string heat_color(double t) {
    t = std::clamp(t, 0.0, 1.0);
    const int r = static_cast<int>(20 + 235 * t);
    const int g = static_cast<int>(30 + 195 * t);
    const int b = static_cast<int>(120 * (1.0 - t) + 40);
    std::ostringstream s;
    s << "rgb(" << r << ',' << g << ',' << b << ')';
    return s.str();
}

inline std::string short_num(double v) {
    std::ostringstream s;
    s.precision(3);
    s << v;
    return s.str();
}

}  // namespace detail

// Heatmap over an x-by-y grid; cells with negative value are masked white.
inline std::string svg_heatmap(const std::vector<double>& xs, const std::vector<double>& ys,
                               const std::vector<std::vector<double>>& values,
                               const std::string& x_label, const std::string& y_label,
                               const std::string& title, bool mask_negative = true) {
    if (xs.empty() || ys.empty()) throw std::invalid_argument("svg_heatmap: empty axes");
    const int margin = 70, cell = 46;
    const int w = margin + cell * static_cast<int>(xs.size()) + 30;
    const int h = margin + cell * static_cast<int>(ys.size()) + 50;
    detail::SvgCanvas svg(w, h);
    svg.text(w / 2.0, 20, title, 13, "middle");

    double lo = 0.0, hi = 0.0;
    for (const auto& row : values)
        for (double v : row) {
            lo = std::min(lo, v);
            hi = std::max(hi, v);
        }
    const double span = hi > (mask_negative ? 0.0 : lo)
                            ? hi - (mask_negative ? 0.0 : lo)
                            : 1.0;
    for (std::size_t iy = 0; iy < ys.size(); ++iy) {
        for (std::size_t ix = 0; ix < xs.size(); ++ix) {
            const double v = values[iy][ix];
            const double x = margin + cell * static_cast<double>(ix);
            const double y = 30.0 + cell * static_cast<double>(iy);
            if (mask_negative && v < 0.0)
                svg.rect(x, y, cell, cell, "white", "#bbbbbb");
            else
                svg.rect(x, y, cell, cell,
                         detail::heat_color((v - (mask_negative ? 0.0 : lo)) / span),
                         "#444444");
        }
        svg.text(margin - 6, 30.0 + cell * (iy + 0.6), detail::short_num(ys[iy]), 10, "end");
    }
    for (std::size_t ix = 0; ix < xs.size(); ++ix)
        svg.text(margin + cell * (ix + 0.5), 30.0 + cell * ys.size() + 14,
                 detail::short_num(xs[ix]), 10, "middle");
    svg.text(margin + cell * xs.size() / 2.0, h - 10, x_label, 11, "middle");
    svg.text(14, 26, y_label, 11);
    return svg.str();
}

// Grouped bar chart; negative bars hang below the baseline.
inline std::string svg_grouped_bars(const std::vector<std::string>& groups,
                                    const std::vector<std::string>& series,
                                    const std::vector<std::vector<double>>& values,
                                    const std::string& title) {
    if (groups.empty() || series.empty())
        throw std::invalid_argument("svg_grouped_bars: empty data");
    const int margin = 60, group_w = 30 * static_cast<int>(series.size()) + 20;
    const int w = margin + group_w * static_cast<int>(groups.size()) + 140;
    const int h = 320;
    const double base = 200.0, scale_h = 140.0;
    detail::SvgCanvas svg(w, h);
    svg.text(w / 2.0, 20, title, 13, "middle");

    double peak = 0.0;
    for (const auto& row : values)
        for (double v : row) peak = std::max(peak, std::abs(v));
    if (peak == 0.0) peak = 1.0;
    const std::vector<std::string> palette{"#3366bb", "#dd8833", "#33aa66", "#aa3355"};

    svg.line(margin - 10, base, margin + group_w * groups.size(), base, "#000000");
    for (std::size_t g = 0; g < groups.size(); ++g) {
        for (std::size_t s = 0; s < series.size(); ++s) {
            const double v = values[g][s];
            const double bh = std::abs(v) / peak * scale_h;
            const double x = margin + group_w * static_cast<double>(g) + 30.0 * s;
            const double y = v >= 0.0 ? base - bh : base;
            svg.rect(x, y, 24, bh, palette[s % palette.size()], "#333333");
        }
        svg.text(margin + group_w * (g + 0.5) - 10, base + 60, groups[g], 11, "middle");
    }
    for (std::size_t s = 0; s < series.size(); ++s) {
        svg.rect(w - 130, 40.0 + 18.0 * s, 12, 12, palette[s % palette.size()], "#333333");
        svg.text(w - 112, 50.0 + 18.0 * s, series[s], 11);
    }
    svg.text(margin - 40, base, detail::short_num(0.0), 10);
    svg.text(margin - 50, base - scale_h, detail::short_num(peak), 10);
    return svg.str();
}

// Weighted histogram with one color per class label.
inline std::string svg_histogram(const std::vector<double>& values,
                                 const std::vector<double>& weights,
                                 const std::vector<int>& classes,
                                 const std::vector<std::string>& class_names, int bins,
                                 const std::string& x_label, const std::string& title) {
    if (values.empty()) throw std::invalid_argument("svg_histogram: empty data");
    const int w = 560, h = 320, margin = 60;
    const double base = 250.0, scale_h = 180.0, plot_w = w - margin - 30;
    double lo = *std::min_element(values.begin(), values.end());
    double hi = *std::max_element(values.begin(), values.end());
    if (hi <= lo) hi = lo + 1.0;
    const int n_classes = static_cast<int>(class_names.size());
    std::vector<std::vector<double>> hist(n_classes, std::vector<double>(bins, 0.0));
    for (std::size_t i = 0; i < values.size(); ++i) {
        int bin = static_cast<int>((values[i] - lo) / (hi - lo) * bins);
        bin = std::clamp(bin, 0, bins - 1);
        hist[classes[i]][bin] += weights[i];
    }
    double peak = 0.0;
    for (const auto& row : hist)
        for (double v : row) peak = std::max(peak, v);
    if (peak == 0.0) peak = 1.0;

    detail::SvgCanvas svg(w, h);
    svg.text(w / 2.0, 20, title, 13, "middle");
    const std::vector<std::string> palette{"#33aa66", "#cc4444", "#888888", "#3366bb"};
    const double bw = plot_w / bins / std::max(1, n_classes);
    for (int c = 0; c < n_classes; ++c)
        for (int b = 0; b < bins; ++b) {
            const double v = hist[c][b];
            if (v == 0.0) continue;
            const double x = margin + plot_w * b / bins + bw * c;
            svg.rect(x, base - v / peak * scale_h, bw, v / peak * scale_h,
                     palette[c % palette.size()], "none");
        }
    svg.line(margin, base, margin + plot_w, base, "#000000");
    svg.text(margin, base + 16, detail::short_num(lo), 10);
    svg.text(margin + plot_w, base + 16, detail::short_num(hi), 10, "end");
    svg.text(margin + plot_w / 2.0, base + 34, x_label, 11, "middle");
    for (int c = 0; c < n_classes; ++c) {
        svg.rect(w - 140, 40.0 + 18.0 * c, 12, 12, palette[c % palette.size()], "#333333");
        svg.text(w - 122, 50.0 + 18.0 * c, class_names[c], 11);
    }
    return svg.str();
}

}  // namespace gslide
