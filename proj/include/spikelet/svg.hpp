#pragma once

#include <string>
#include <vector>

namespace spikelet {

struct SvgSeries {
    std::string label;
    std::string color;  // CSS color
    std::vector<double> x;
    std::vector<double> y;
};

// Minimal static line plot; log-scale flags apply base-10 log to the axis.
void writeSvgPlot(const std::string& path, const std::string& title,
                  const std::vector<SvgSeries>& series, bool logX = false, bool logY = false);

} // namespace spikelet
