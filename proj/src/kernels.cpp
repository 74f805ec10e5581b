#include "spikelet/kernels.hpp"

#include <cmath>
#include <string>

#include "spikelet/errors.hpp"

namespace spikelet {

double minTimeConstant(double dt) {
    return dt / (-std::log(kAlphaFloor));
}

ScaleGrid makeScaleGrid(double level1, double c, std::size_t K) {
    if (!(level1 > 0.0))
        throw Error(errcode::kRange, "scale grid: level1 must be positive");
    if (K < 1)
        throw Error(errcode::kRange, "scale grid: K must be at least 1");
    if (!(c >= kMinScaleRatio))
        throw Error(errcode::kFloor,
                    "scale grid: ratio c = " + std::to_string(c) +
                        " below channel-distinctness floor " + std::to_string(kMinScaleRatio));
    ScaleGrid g;
    g.c = c;
    g.K = K;
    g.levels.resize(K + 1);
    g.levels[0] = level1 / c;
    for (std::size_t k = 1; k <= K; ++k)
        g.levels[k] = level1 * std::pow(c, static_cast<double>(k - 1));
    return g;
}

std::vector<double> limitKernelTimeConstants(double sigma, double c, std::size_t n) {
    if (!(sigma > 0.0))
        throw Error(errcode::kRange, "limit kernel: sigma must be positive");
    if (!(c > 1.0))
        throw Error(errcode::kRange, "limit kernel: c must exceed 1");
    std::vector<double> mus(n);
    const double root = std::sqrt(c * c - 1.0) * sigma;
    for (std::size_t j = 1; j <= n; ++j)
        mus[j - 1] = root * std::pow(c, -static_cast<double>(j));
    return mus;
}

std::size_t maxStableCascadeOrder(double sigma, double c, double dt) {
    const double muMin = minTimeConstant(dt);
    const double mu1 = std::sqrt(c * c - 1.0) * sigma / c;
    if (mu1 < muMin) return 0;
    // mu_j = mu_1 * c^(1-j) >= muMin  <=>  j <= 1 + log_c(mu1/muMin)
    const double nMax = 1.0 + std::log(mu1 / muMin) / std::log(c);
    return static_cast<std::size_t>(std::floor(nMax + 1e-12));
}

Signal smoothGaussian(const Signal& in, double sigma) {
    if (!(sigma >= 0.0))
        throw Error(errcode::kRange, "gaussian: sigma must be non-negative");
    if (sigma == 0.0 || in.samples.empty()) return in;

    const double dt = in.dt;
    const auto r = static_cast<std::ptrdiff_t>(std::ceil(6.0 * sigma / dt));
    std::vector<double> w(static_cast<std::size_t>(2 * r + 1));
    double sum = 0.0;
    for (std::ptrdiff_t i = -r; i <= r; ++i) {
        const double t = static_cast<double>(i) * dt;
        const double v = std::exp(-t * t / (2.0 * sigma * sigma));
        w[static_cast<std::size_t>(i + r)] = v;
        sum += v;
    }
    for (double& v : w) v /= sum;  // unit sum: constants are preserved exactly

    const auto n = static_cast<std::ptrdiff_t>(in.samples.size());
    Signal out;
    out.dt = dt;
    out.samples.resize(in.samples.size());
    // symmetric (half-sample) reflection: x[-1-j] = x[j], x[n+j] = x[n-1-j]
    auto reflect = [n](std::ptrdiff_t idx) {
        while (idx < 0 || idx >= n) {
            if (idx < 0) idx = -idx - 1;
            if (idx >= n) idx = 2 * n - 1 - idx;
        }
        return idx;
    };
    for (std::ptrdiff_t t = 0; t < n; ++t) {
        double acc = 0.0;
        for (std::ptrdiff_t i = -r; i <= r; ++i)
            acc += w[static_cast<std::size_t>(i + r)] *
                   in.samples[static_cast<std::size_t>(reflect(t - i))];
        out.samples[static_cast<std::size_t>(t)] = acc;
    }
    return out;
}

Signal smoothExponential(const Signal& in, double mu) {
    const double muMin = minTimeConstant(in.dt);
    if (!(mu >= muMin))
        throw Error(errcode::kFloor,
                    "exponential: mu = " + std::to_string(mu) + " below stability floor " +
                        std::to_string(muMin) + " (alpha < " + std::to_string(kAlphaFloor) + ")");
    const double alpha = std::exp(-in.dt / mu);
    Signal out;
    out.dt = in.dt;
    out.samples.resize(in.samples.size());
    double y = 0.0;  // zero initial state = causal zero padding on the left
    for (std::size_t t = 0; t < in.samples.size(); ++t) {
        y = alpha * y + (1.0 - alpha) * in.samples[t];
        out.samples[t] = y;
    }
    return out;
}

Signal smoothLimitKernel(const Signal& in, double sigma, double c, std::size_t n) {
    if (n < 1)
        throw Error(errcode::kRange, "limit kernel: cascade order must be at least 1");
    const auto mus = limitKernelTimeConstants(sigma, c, n);
    const double muMin = minTimeConstant(in.dt);
    for (std::size_t j = 0; j < n; ++j) {
        if (mus[j] < muMin)
            throw Error(errcode::kFloor,
                        "limit kernel: stage " + std::to_string(j + 1) + " has mu = " +
                            std::to_string(mus[j]) + " below stability floor " +
                            std::to_string(muMin));
    }
    Signal out = in;
    for (std::size_t j = 0; j < n; ++j) out = smoothExponential(out, mus[j]);
    return out;
}

} // namespace spikelet
