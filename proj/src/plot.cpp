#include "twoseq/plot.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <sstream>

namespace twoseq {

namespace {

constexpr const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e",
                                    "#9467bd", "#8c564b", "#e377c2", "#17becf"};

std::string fmt(double v, const char* spec = "%.2f") {
    char buf[32];
    std::snprintf(buf, sizeof buf, spec, v);
    return buf;
}

std::string escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        switch (c) {
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '&': out += "&amp;"; break;
            default: out += c;
        }
    }
    return out;
}

}  // namespace

std::string render_mse_svg(const std::vector<SimRow>& rows, const std::string& title) {
    using Point = std::pair<double, double>;
    std::map<std::string, std::vector<Point>> series;
    for (const auto& r : rows) {
        if (!(r.mse > 0.0)) continue;
        const std::string key = to_string(r.estimator) + " beta=" + fmt(r.beta, "%g") +
                                " eps=" + fmt(r.epsilon, "%g") + " a=" + r.a.to_string() +
                                " b=" + r.b.to_string();
        series[key].emplace_back(std::log10(static_cast<double>(r.n)), std::log10(r.mse));
    }

    double x0 = 0, x1 = 1, y0 = 0, y1 = 1;
    bool first = true;
    for (auto& [key, pts] : series) {
        std::sort(pts.begin(), pts.end());
        for (const auto& [x, y] : pts) {
            if (first) {
                x0 = x1 = x;
                y0 = y1 = y;
                first = false;
            }
            x0 = std::min(x0, x), x1 = std::max(x1, x);
            y0 = std::min(y0, y), y1 = std::max(y1, y);
        }
    }
    if (x1 - x0 < 1e-9) x0 -= 0.5, x1 += 0.5;
    if (y1 - y0 < 1e-9) y0 -= 0.5, y1 += 0.5;
    x0 = std::floor(x0), x1 = std::ceil(x1);
    y0 = std::floor(y0), y1 = std::ceil(y1);

    const double W = 760, H = 480, left = 70, right = 260, top = 40, bottom = 55;
    const double pw = W - left - right, ph = H - top - bottom;
    auto sx = [&](double x) { return left + (x - x0) / (x1 - x0) * pw; };
    auto sy = [&](double y) { return top + (y1 - y) / (y1 - y0) * ph; };

    std::ostringstream svg;
    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H
        << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
    svg << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    if (!title.empty())
        svg << "<text x=\"" << left << "\" y=\"22\" font-size=\"15\">" << escape(title) << "</text>\n";

    svg << "<g stroke=\"#ddd\">\n";
    for (double x = x0; x <= x1 + 1e-9; x += 1)
        svg << "<line x1=\"" << fmt(sx(x)) << "\" y1=\"" << top << "\" x2=\"" << fmt(sx(x))
            << "\" y2=\"" << top + ph << "\"/>\n";
    for (double y = y0; y <= y1 + 1e-9; y += 1)
        svg << "<line x1=\"" << left << "\" y1=\"" << fmt(sy(y)) << "\" x2=\"" << left + pw
            << "\" y2=\"" << fmt(sy(y)) << "\"/>\n";
    svg << "</g>\n";
    svg << "<rect x=\"" << left << "\" y=\"" << top << "\" width=\"" << pw << "\" height=\"" << ph
        << "\" fill=\"none\" stroke=\"black\"/>\n";
    for (double x = x0; x <= x1 + 1e-9; x += 1)
        svg << "<text x=\"" << fmt(sx(x)) << "\" y=\"" << top + ph + 18
            << "\" text-anchor=\"middle\">" << fmt(x, "%g") << "</text>\n";
    for (double y = y0; y <= y1 + 1e-9; y += 1)
        svg << "<text x=\"" << left - 8 << "\" y=\"" << fmt(sy(y) + 4)
            << "\" text-anchor=\"end\">" << fmt(y, "%g") << "</text>\n";
    svg << "<text x=\"" << left + pw / 2 << "\" y=\"" << H - 12
        << "\" text-anchor=\"middle\">log10 n</text>\n";
    svg << "<text transform=\"translate(18," << top + ph / 2
        << ") rotate(-90)\" text-anchor=\"middle\">log10 MSE</text>\n";

    std::size_t idx = 0;
    for (const auto& [key, pts] : series) {
        const char* colour = kPalette[idx % std::size(kPalette)];
        svg << "<polyline fill=\"none\" stroke=\"" << colour << "\" stroke-width=\"2\" points=\"";
        for (const auto& [x, y] : pts) svg << fmt(sx(x)) << ',' << fmt(sy(y)) << ' ';
        svg << "\"/>\n";
        for (const auto& [x, y] : pts)
            svg << "<circle cx=\"" << fmt(sx(x)) << "\" cy=\"" << fmt(sy(y)) << "\" r=\"3\" fill=\""
                << colour << "\"/>\n";
        const double ly = top + 10 + 18.0 * static_cast<double>(idx);
        svg << "<line x1=\"" << left + pw + 15 << "\" y1=\"" << ly << "\" x2=\"" << left + pw + 35
            << "\" y2=\"" << ly << "\" stroke=\"" << colour << "\" stroke-width=\"2\"/>\n";
        svg << "<text x=\"" << left + pw + 40 << "\" y=\"" << ly + 4 << "\">" << escape(key)
            << "</text>\n";
        ++idx;
    }
    svg << "</svg>\n";
    return svg.str();
}

}  // namespace twoseq
