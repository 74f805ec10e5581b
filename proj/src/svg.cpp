#include "spikelet/svg.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "spikelet/errors.hpp"

namespace spikelet {

namespace {

double axisValue(double v, bool logScale) {
    if (!logScale) return v;
    return v > 0.0 ? std::log10(v) : std::numeric_limits<double>::quiet_NaN();
}

} // namespace

void writeSvgPlot(const std::string& path, const std::string& title,
                  const std::vector<SvgSeries>& series, bool logX, bool logY) {
    const double width = 900.0, height = 540.0, margin = 60.0;
    double xMin = std::numeric_limits<double>::infinity(), xMax = -xMin;
    double yMin = xMin, yMax = -xMin;
    for (const auto& s : series) {
        const std::size_t n = std::min(s.x.size(), s.y.size());
        for (std::size_t i = 0; i < n; ++i) {
            const double x = axisValue(s.x[i], logX), y = axisValue(s.y[i], logY);
            if (std::isnan(x) || std::isnan(y)) continue;
            xMin = std::min(xMin, x);
            xMax = std::max(xMax, x);
            yMin = std::min(yMin, y);
            yMax = std::max(yMax, y);
        }
    }
    if (!(xMax >= xMin) || !(yMax >= yMin)) {
        xMin = yMin = 0.0;
        xMax = yMax = 1.0;
    }
    if (xMax == xMin) xMax = xMin + 1.0;
    if (yMax == yMin) yMax = yMin + 1.0;
    auto px = [&](double x) {
        return margin + (axisValue(x, logX) - xMin) / (xMax - xMin) * (width - 2 * margin);
    };
    auto py = [&](double y) {
        return height - margin -
               (axisValue(y, logY) - yMin) / (yMax - yMin) * (height - 2 * margin);
    };
    std::ostringstream out;
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\""
        << height << "\" viewBox=\"0 0 " << width << " " << height << "\">\n"
        << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
        << "<text x=\"" << width / 2 << "\" y=\"30\" text-anchor=\"middle\" font-size=\"18\">"
        << title << "</text>\n"
        << "<rect x=\"" << margin << "\" y=\"" << margin << "\" width=\"" << width - 2 * margin
        << "\" height=\"" << height - 2 * margin
        << "\" fill=\"none\" stroke=\"#888\" stroke-width=\"1\"/>\n";
    std::size_t legendRow = 0;
    for (const auto& s : series) {
        const std::size_t n = std::min(s.x.size(), s.y.size());
        out << "<polyline fill=\"none\" stroke=\"" << s.color << "\" stroke-width=\"1.5\" points=\"";
        bool open = false;
        for (std::size_t i = 0; i < n; ++i) {
            const double x = axisValue(s.x[i], logX), y = axisValue(s.y[i], logY);
            if (std::isnan(x) || std::isnan(y)) continue;
            if (open) out << ' ';
            out << px(s.x[i]) << ',' << py(s.y[i]);
            open = true;
        }
        out << "\"/>\n";
        out << "<text x=\"" << width - margin - 160 << "\" y=\"" << margin + 20 + 18 * legendRow
            << "\" font-size=\"13\" fill=\"" << s.color << "\">" << s.label << "</text>\n";
        ++legendRow;
    }
    out << "<text x=\"" << margin << "\" y=\"" << height - margin + 35 << "\" font-size=\"12\">"
        << (logX ? "log10 x: " : "x: ") << xMin << " .. " << xMax << "</text>\n";
    out << "<text x=\"" << margin << "\" y=\"" << margin - 10 << "\" font-size=\"12\">"
        << (logY ? "log10 y: " : "y: ") << yMin << " .. " << yMax << "</text>\n";
    out << "</svg>\n";
    std::ofstream f(path);
    if (!f) throw Error(errcode::kIo, "cannot open " + path + " for writing");
    f << out.str();
    if (!f) throw Error(errcode::kIo, "write failed on " + path);
}

} // namespace spikelet
