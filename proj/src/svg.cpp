#include "svg.hpp"

#include <cmath>
#include <cstdio>

namespace crl {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr int kCanvas = 800;
constexpr double kCenter = 400.0;
constexpr double kRadius = 350.0;

const char* kPalette[8] = {"#4c78a8", "#f58518", "#54a24b", "#e45756",
                           "#72b7b2", "#eeca3b", "#b279a2", "#9d755d"};

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.6f", v);
    return buf;
}

void point(std::string& d, double radius_fraction, double angle, bool first) {
    double x = kCenter + kRadius * radius_fraction * std::cos(angle);
    double y = kCenter - kRadius * radius_fraction * std::sin(angle);
    d += first ? "M " : "L ";
    d += fmt(x) + "," + fmt(y) + " ";
}

std::string document(const ScoreCard& card, bool origami) {
    const size_t n = card.axes.size();
    if (n < 3) fail(ErrorKind::Argument, "plots need at least 3 axes");
    const double step = 2.0 * kPi / static_cast<double>(n);

    std::string svg;
    svg += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" +
           std::to_string(kCanvas) + "\" height=\"" + std::to_string(kCanvas) + "\" viewBox=\"0 0 " +
           std::to_string(kCanvas) + " " + std::to_string(kCanvas) + "\">\n";
    svg += "<title>" + (card.name.empty() ? std::string("scorecard") : card.name) +
           (origami ? " (origami)" : " (radar)") + "</title>\n";

    svg += "<g stroke=\"#cccccc\" stroke-width=\"1\" fill=\"none\">\n";
    {
        // Unit ring.
        std::string d;
        for (size_t i = 0; i < n; ++i) point(d, 1.0, step * static_cast<double>(i), i == 0);
        svg += "<path d=\"" + d + "Z\"/>\n";
    }
    for (size_t i = 0; i < n; ++i) {
        double a = step * static_cast<double>(i);
        svg += "<line x1=\"" + fmt(kCenter) + "\" y1=\"" + fmt(kCenter) + "\" x2=\"" +
               fmt(kCenter + kRadius * std::cos(a)) + "\" y2=\"" +
               fmt(kCenter - kRadius * std::sin(a)) + "\"/>\n";
    }
    if (origami) {
        svg += "<g stroke-dasharray=\"4 4\">\n";
        for (size_t i = 0; i < n; ++i) {
            double a = step * static_cast<double>(i) + step / 2.0;
            svg += "<line x1=\"" + fmt(kCenter) + "\" y1=\"" + fmt(kCenter) + "\" x2=\"" +
                   fmt(kCenter + kRadius * std::cos(a)) + "\" y2=\"" +
                   fmt(kCenter - kRadius * std::sin(a)) + "\"/>\n";
        }
        svg += "</g>\n";
    }
    svg += "</g>\n";

    svg += "<g font-family=\"sans-serif\" font-size=\"16\" fill=\"#333333\" "
           "text-anchor=\"middle\">\n";
    for (size_t i = 0; i < n; ++i) {
        double a = step * static_cast<double>(i);
        double x = kCenter + (kRadius + 28.0) * std::cos(a);
        double y = kCenter - (kRadius + 28.0) * std::sin(a) + 5.0;
        svg += "<text x=\"" + fmt(x) + "\" y=\"" + fmt(y) + "\">" + card.axes[i].name +
               "</text>\n";
    }
    svg += "</g>\n";

    for (size_t m = 0; m < card.models.size(); ++m) {
        const auto& model = card.models[m];
        const char* color = kPalette[m % 8];
        std::string d;
        for (size_t i = 0; i < n; ++i) {
            double a = step * static_cast<double>(i);
            point(d, model.normalized[i], a, i == 0);
            if (origami) point(d, card.h, a + step / 2.0, false);
        }
        svg += "<path class=\"model\" data-name=\"" + model.name + "\" d=\"" + d +
               "Z\" stroke=\"" + color + "\" stroke-width=\"2\" fill=\"" + color +
               "\" fill-opacity=\"0.2\"/>\n";
    }
    svg += "</svg>\n";
    return svg;
}

}  // namespace

std::string svg_radar(const ScoreCard& card) { return document(card, false); }

std::string svg_origami(const ScoreCard& card) { return document(card, true); }

}  // namespace crl
