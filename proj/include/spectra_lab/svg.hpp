#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <string>
#include <utility>
#include <vector>

namespace spectra_lab::svg {

struct Series {
    std::string name;
    std::string colour;
    std::vector<std::pair<double, double>> points;
    bool steps = false; // draw as a right-continuous step function
};

namespace detail {

inline std::string num(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", x);
    return buf;
}

inline std::string label(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.4g", x);
    return buf;
}

inline std::string escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        if (c == '<') out += "&lt;";
        else if (c == '>') out += "&gt;";
        else if (c == '&') out += "&amp;";
        else out += c;
    }
    return out;
}

} // namespace detail

// Polylines on a shared box; an optional horizontal reference line (e.g. y = 1).
inline std::string plot(const std::vector<Series>& series, const std::string& title, const std::string& xlabel,
                        const std::string& ylabel, double reference_y = std::nan("")) {
    const double W = 640, H = 400, L = 60, R = 20, T = 40, B = 50;
    double x0 = INFINITY, x1 = -INFINITY, y0 = 0.0, y1 = -INFINITY;
    for (const auto& s : series)
        for (auto [x, y] : s.points) {
            if (!std::isfinite(x) || !std::isfinite(y)) continue;
            x0 = std::min(x0, x);
            x1 = std::max(x1, x);
            y0 = std::min(y0, y);
            y1 = std::max(y1, y);
        }
    if (std::isfinite(reference_y)) y1 = std::max(y1, reference_y);
    if (!(x0 < x1)) {
        x0 = std::isfinite(x0) ? x0 - 1 : 0;
        x1 = x0 + 2;
    }
    if (!(y0 < y1)) y1 = y0 + 1;
    double pad = 0.05 * (x1 - x0);
    x0 -= pad;
    x1 += pad;
    y1 += 0.05 * (y1 - y0);
    auto px = [&](double x) { return L + (x - x0) / (x1 - x0) * (W - L - R); };
    auto py = [&](double y) { return H - B - (y - y0) / (y1 - y0) * (H - T - B); };

    std::string out = "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"640\" height=\"400\" viewBox=\"0 0 640 400\">\n";
    out += "<rect width=\"640\" height=\"400\" fill=\"white\"/>\n";
    out += "<text x=\"320\" y=\"24\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"15\">" +
           detail::escape(title) + "</text>\n";
    out += "<rect x=\"" + detail::num(L) + "\" y=\"" + detail::num(T) + "\" width=\"" + detail::num(W - L - R) +
           "\" height=\"" + detail::num(H - T - B) + "\" fill=\"none\" stroke=\"black\"/>\n";
    for (int k = 0; k <= 4; ++k) {
        double x = x0 + (x1 - x0) * k / 4, y = y0 + (y1 - y0) * k / 4;
        out += "<text x=\"" + detail::num(px(x)) + "\" y=\"" + detail::num(H - B + 16) +
               "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">" + detail::label(x) + "</text>\n";
        out += "<text x=\"" + detail::num(L - 6) + "\" y=\"" + detail::num(py(y) + 4) +
               "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">" + detail::label(y) + "</text>\n";
    }
    out += "<text x=\"320\" y=\"" + detail::num(H - 12) + "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\">" +
           detail::escape(xlabel) + "</text>\n";
    out += "<text x=\"16\" y=\"" + detail::num(H / 2) + "\" transform=\"rotate(-90 16 " + detail::num(H / 2) +
           ")\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\">" + detail::escape(ylabel) + "</text>\n";
    if (std::isfinite(reference_y))
        out += "<line x1=\"" + detail::num(L) + "\" y1=\"" + detail::num(py(reference_y)) + "\" x2=\"" + detail::num(W - R) +
               "\" y2=\"" + detail::num(py(reference_y)) + "\" stroke=\"grey\" stroke-dasharray=\"4 3\"/>\n";
    int row = 0;
    for (const auto& s : series) {
        std::string pts;
        for (std::size_t k = 0; k < s.points.size(); ++k) {
            auto [x, y] = s.points[k];
            if (s.steps && k > 0) pts += detail::num(px(x)) + "," + detail::num(py(s.points[k - 1].second)) + " ";
            pts += detail::num(px(x)) + "," + detail::num(py(y)) + " ";
        }
        if (s.steps && !s.points.empty()) pts += detail::num(px(x1)) + "," + detail::num(py(s.points.back().second));
        out += "<polyline fill=\"none\" stroke=\"" + s.colour + "\" stroke-width=\"2\" points=\"" + pts + "\"/>\n";
        double ly = T + 16 + 16 * row++;
        out += "<line x1=\"" + detail::num(L + 10) + "\" y1=\"" + detail::num(ly) + "\" x2=\"" + detail::num(L + 30) + "\" y2=\"" +
               detail::num(ly) + "\" stroke=\"" + s.colour + "\" stroke-width=\"2\"/>\n";
        out += "<text x=\"" + detail::num(L + 36) + "\" y=\"" + detail::num(ly + 4) +
               "\" font-family=\"sans-serif\" font-size=\"11\">" + detail::escape(s.name) + "</text>\n";
    }
    out += "</svg>\n";
    return out;
}

} // namespace spectra_lab::svg
