#include "svg.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace kpeaks::svg {

namespace {

constexpr double kWidth = 800;
constexpr double kHeight = 500;
constexpr double kMargin = 50;

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.4f", v);
    return buf;
}

}  // namespace

void write_trajectory(const std::string& path, const std::string& title,
                      const std::vector<std::pair<double, double>>& polyline,
                      const std::vector<Marker>& markers) {
    if (polyline.empty()) throw std::invalid_argument("empty polyline");

    double x0 = polyline[0].first, x1 = x0, y0 = polyline[0].second, y1 = y0;
    for (const auto& [x, y] : polyline) {
        x0 = std::min(x0, x);
        x1 = std::max(x1, x);
        y0 = std::min(y0, y);
        y1 = std::max(y1, y);
    }
    if (x1 - x0 < 1e-12) x1 = x0 + 1;
    if (y1 - y0 < 1e-12) y1 = y0 + 1;

    const auto sx = [&](double x) {
        return kMargin + (x - x0) / (x1 - x0) * (kWidth - 2 * kMargin);
    };
    const auto sy = [&](double y) {
        return kHeight - kMargin - (y - y0) / (y1 - y0) * (kHeight - 2 * kMargin);
    };

    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write svg file: " + path);

    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\""
        << kHeight << "\" viewBox=\"0 0 " << kWidth << " " << kHeight << "\">\n";
    out << "  <rect width=\"" << kWidth << "\" height=\"" << kHeight << "\" fill=\"white\"/>\n";
    out << "  <text x=\"" << kMargin << "\" y=\"25\" font-family=\"monospace\" font-size=\"14\">"
        << title << "</text>\n";

    // axes box
    out << "  <rect x=\"" << kMargin << "\" y=\"" << kMargin << "\" width=\""
        << kWidth - 2 * kMargin << "\" height=\"" << kHeight - 2 * kMargin
        << "\" fill=\"none\" stroke=\"#cccccc\"/>\n";
    out << "  <text x=\"" << kMargin << "\" y=\"" << kHeight - kMargin + 20
        << "\" font-family=\"monospace\" font-size=\"11\">x=" << fmt(x0) << "</text>\n";
    out << "  <text x=\"" << kWidth - kMargin - 80 << "\" y=\"" << kHeight - kMargin + 20
        << "\" font-family=\"monospace\" font-size=\"11\">x=" << fmt(x1) << "</text>\n";
    out << "  <text x=\"5\" y=\"" << sy(y0) << "\" font-family=\"monospace\" font-size=\"11\">y="
        << fmt(y0) << "</text>\n";
    out << "  <text x=\"5\" y=\"" << sy(y1) << "\" font-family=\"monospace\" font-size=\"11\">y="
        << fmt(y1) << "</text>\n";

    out << "  <polyline fill=\"none\" stroke=\"#1f77b4\" stroke-width=\"1.5\" points=\"";
    for (size_t i = 0; i < polyline.size(); ++i) {
        if (i) out << " ";
        out << fmt(sx(polyline[i].first)) << "," << fmt(sy(polyline[i].second));
    }
    out << "\"/>\n";

    for (const Marker& m : markers) {
        out << "  <circle cx=\"" << fmt(sx(m.x)) << "\" cy=\"" << fmt(sy(m.y))
            << "\" r=\"4\" fill=\"" << (m.maximal ? "#d62728" : "#2ca02c") << "\"/>\n";
    }
    out << "</svg>\n";
}

}  // namespace kpeaks::svg
