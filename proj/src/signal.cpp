#include "spikelet/signal.hpp"

#include <cmath>
#include <limits>

#include "spikelet/errors.hpp"

namespace spikelet {

double mean(const std::vector<double>& x) {
    if (x.empty()) return 0.0;
    double s = 0.0;
    for (double v : x) s += v;
    return s / static_cast<double>(x.size());
}

double stddev(const std::vector<double>& x) {
    if (x.empty()) return 0.0;
    const double m = mean(x);
    double s = 0.0;
    for (double v : x) s += (v - m) * (v - m);
    return std::sqrt(s / static_cast<double>(x.size()));
}

double rmse(const std::vector<double>& a, const std::vector<double>& b) {
    if (a.size() != b.size())
        throw Error(errcode::kRange, "rmse: length mismatch");
    if (a.empty()) return 0.0;
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double d = a[i] - b[i];
        s += d * d;
    }
    return std::sqrt(s / static_cast<double>(a.size()));
}

double nrmse(const std::vector<double>& reference, const std::vector<double>& estimate) {
    const double err = rmse(reference, estimate);
    const double sigma = stddev(reference);
    if (sigma == 0.0)
        return err == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
    return err / sigma;
}

} // namespace spikelet
