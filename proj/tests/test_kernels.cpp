#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "spikelet/decoder.hpp"
#include "spikelet/errors.hpp"
#include "spikelet/kernels.hpp"
#include "spikelet/signal.hpp"

using namespace spikelet;

namespace {

Signal impulse(std::size_t n, double dt, std::size_t at = 0) {
    Signal s;
    s.dt = dt;
    s.samples.assign(n, 0.0);
    s.samples[at] = 1.0;
    return s;
}

Signal constant(std::size_t n, double dt, double v) {
    Signal s;
    s.dt = dt;
    s.samples.assign(n, v);
    return s;
}

Signal toneMix(std::size_t n, double dt) {
    Signal s;
    s.dt = dt;
    s.samples.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double t = static_cast<double>(i) * dt;
        s.samples[i] = std::sin(2.0 * M_PI * 0.8 * t) + 0.5 * std::sin(2.0 * M_PI * 2.3 * t) +
                       0.3 * std::sin(2.0 * M_PI * 4.1 * t + 0.5);
    }
    return s;
}

// midpoint quadrature of the convolution integral int_0^t e^{-u/a}/a * e^{-(t-u)/b}/b du
double composedByQuadrature(double t, double a, double b, std::size_t steps = 20000) {
    if (t <= 0.0) return 0.0;
    const double h = t / static_cast<double>(steps);
    double acc = 0.0;
    for (std::size_t i = 0; i < steps; ++i) {
        const double u = (static_cast<double>(i) + 0.5) * h;
        acc += std::exp(-u / a) / a * std::exp(-(t - u) / b) / b;
    }
    return acc * h;
}

} // namespace

TEST_CASE("scale grid layout and guards") {
    const ScaleGrid g = makeScaleGrid(0.01, 2.0, 4);
    REQUIRE(g.levels.size() == 5);
    CHECK(g.levels[0] == doctest::Approx(0.005).epsilon(1e-15));
    CHECK(g.levels[1] == 0.01);
    CHECK(g.levels[4] == doctest::Approx(0.08).epsilon(1e-15));
    CHECK(g.finest() == g.levels[0]);
    CHECK(g.coarsest() == g.levels[4]);
    CHECK_THROWS_AS(makeScaleGrid(0.0, 2.0, 3), Error);
    CHECK_THROWS_AS(makeScaleGrid(0.01, 2.0, 0), Error);
    CHECK_THROWS_AS(makeScaleGrid(0.01, 1.04, 3), Error);  // ratio floor
}

TEST_CASE("gaussian impulse response matches the sampled density with unit sum") {
    const double dt = 0.01, sigma = 0.1;  // sigma = 10 dt
    const std::size_t half = 121, n = 2 * half + 1;
    const Signal y = smoothGaussian(impulse(n, dt, half), sigma);

    // independent construction: renormalized samples of exp(-t^2 / 2 sigma^2) on [-6s, 6s]
    const auto r = static_cast<std::ptrdiff_t>(std::floor(6.0 * sigma / dt));
    std::vector<double> w(static_cast<std::size_t>(2 * r + 1));
    double sum = 0.0;
    for (std::ptrdiff_t i = -r; i <= r; ++i) {
        const double t = static_cast<double>(i) * dt;
        w[static_cast<std::size_t>(i + r)] = std::exp(-0.5 * t * t / (sigma * sigma));
        sum += w[static_cast<std::size_t>(i + r)];
    }
    double worst = 0.0, outSum = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const std::ptrdiff_t off = static_cast<std::ptrdiff_t>(i) - static_cast<std::ptrdiff_t>(half);
        const double expect = std::abs(off) <= r ? w[static_cast<std::size_t>(off + r)] / sum : 0.0;
        worst = std::max(worst, std::abs(y.samples[i] - expect));
        outSum += y.samples[i];
    }
    CHECK(worst < 1e-12);
    CHECK(std::abs(outSum - 1.0) < 1e-9);
}

TEST_CASE("gaussian preserves constants and sigma zero is the identity") {
    const Signal c = constant(64, 0.01, 5.0);
    const Signal y = smoothGaussian(c, 0.03);
    for (double v : y.samples) CHECK(v == doctest::Approx(5.0).epsilon(1e-12));

    const Signal x = toneMix(128, 0.01);
    const Signal idy = smoothGaussian(x, 0.0);
    for (std::size_t i = 0; i < x.samples.size(); ++i) CHECK(idy.samples[i] == x.samples[i]);

    CHECK_THROWS_AS(smoothGaussian(x, -0.1), Error);
}

TEST_CASE("gaussian semigroup composition") {
    const Signal x = toneMix(4000, 0.01);
    const double sa = 0.05, sb = 0.08;
    const Signal two = smoothGaussian(smoothGaussian(x, sa), sb);
    const Signal one = smoothGaussian(x, std::sqrt(sa * sa + sb * sb));
    CHECK(nrmse(one.samples, two.samples) < 1e-6);  // measured ~8.6e-10
}

TEST_CASE("exponential impulse response is the geometric sequence with unit sum") {
    const double dt = 0.01, mu = 1.0;
    const std::size_t n = 4000;  // 40 mu, geometric tail ~4e-18
    const Signal y = smoothExponential(impulse(n, dt), mu);
    const double alpha = std::exp(-dt / mu);
    double sum = 0.0, pow = 1.0 - alpha;
    for (std::size_t t = 0; t < n; ++t) {
        CHECK(y.samples[t] == doctest::Approx(pow).epsilon(1e-13));
        sum += y.samples[t];
        pow *= alpha;
    }
    CHECK(std::abs(sum - 1.0) < 1e-9);
}

TEST_CASE("exponential reaches steady state on constants") {
    const double dt = 1e-3, mu = 0.05, level = 3.7;
    const auto settle = static_cast<std::size_t>(20.0 * mu / dt);
    const Signal y = smoothExponential(constant(2 * settle, dt, level), mu);
    for (std::size_t t = settle; t < y.samples.size(); ++t)
        CHECK(std::abs(y.samples[t] - level) < 1e-6 * level);
}

TEST_CASE("exponential stability floor") {
    const Signal x = constant(32, 0.01, 1.0);
    CHECK_THROWS_WITH_AS(smoothExponential(x, 0.001), doctest::Contains("stability floor"), Error);
    const double muMin = minTimeConstant(0.01);
    CHECK(muMin == doctest::Approx(0.01 / -std::log(kAlphaFloor)).epsilon(1e-12));
    CHECK_NOTHROW(smoothExponential(x, muMin));
}

TEST_CASE("composed exponential closed form matches quadrature") {
    const double pairs[10][2] = {{1.0, 2.0},  {2.0, 1.0},   {0.5, 0.8},  {0.3, 0.1},
                                 {0.05, 0.02}, {0.7, 3.0},  {1.5, 0.9},  {1.0, 1.0},
                                 {0.4, 0.4},  {0.02, 0.02}};
    for (const auto& p : pairs) {
        const double a = p[0], b = p[1];
        const double tMax = 8.0 * std::max(a, b);
        double peak = 0.0, worst = 0.0;
        for (int i = 1; i <= 60; ++i) {
            const double t = tMax * static_cast<double>(i) / 60.0;
            const double closed = composedExponential(t, a, b);
            peak = std::max(peak, std::abs(closed));
            worst = std::max(worst, std::abs(closed - composedByQuadrature(t, a, b)));
        }
        CHECK(worst < 1e-8 * peak);  // measured ~1.2e-9 relative
    }
    CHECK(composedExponential(0.0, 1.0, 2.0) == 0.0);
    // confluent limit is continuous in the parameters
    CHECK(composedExponential(0.7, 0.5, 0.5) ==
          doctest::Approx(composedExponential(0.7, 0.5, 0.5 + 1e-9)).epsilon(1e-6));
}

TEST_CASE("limit kernel stage constants and truncated sum identity") {
    const double sigma = 1.0, c = std::sqrt(2.0);
    const std::size_t n = 7;
    const auto mus = limitKernelTimeConstants(sigma, c, n);
    REQUIRE(mus.size() == n);
    double sumSq = 0.0;
    for (std::size_t j = 1; j <= n; ++j) {
        const double expect = std::pow(c, -static_cast<double>(j)) * std::sqrt(c * c - 1.0) * sigma;
        CHECK(mus[j - 1] == doctest::Approx(expect).epsilon(1e-12));
        sumSq += mus[j - 1] * mus[j - 1];
    }
    const double target = sigma * sigma * (1.0 - std::pow(c, -2.0 * static_cast<double>(n)));
    CHECK(std::abs(sumSq - target) < 1e-6 * sigma * sigma);
}

TEST_CASE("limit kernel preserves constants and degenerates at n = 1") {
    const double dt = 1e-3, sigma = 0.05, c = 2.0;
    const Signal x = toneMix(2000, dt);
    const Signal one = smoothLimitKernel(x, sigma, c, 1);
    const Signal ref = smoothExponential(x, std::sqrt(c * c - 1.0) * sigma / c);
    for (std::size_t i = 0; i < x.samples.size(); ++i) CHECK(one.samples[i] == ref.samples[i]);

    const Signal cst = smoothLimitKernel(constant(4000, dt, 2.5), sigma, c, 7);
    CHECK(std::abs(cst.samples.back() - 2.5) < 1e-6 * 2.5);
}

TEST_CASE("limit kernel cascade variance matches the stage sum") {
    const double dt = 1e-3, sigma = 1.0, c = std::sqrt(2.0);
    const std::size_t n = 7;
    const Signal y = smoothLimitKernel(impulse(20000, dt), sigma, c, n);
    double m0 = 0.0, m1 = 0.0, m2 = 0.0;
    for (std::size_t i = 0; i < y.samples.size(); ++i) {
        const double t = static_cast<double>(i) * dt;
        m0 += y.samples[i];
        m1 += y.samples[i] * t;
        m2 += y.samples[i] * t * t;
    }
    const double var = m2 / m0 - (m1 / m0) * (m1 / m0);
    double target = 0.0;
    for (double m : limitKernelTimeConstants(sigma, c, n)) target += m * m;
    CHECK(std::abs(var - target) < 0.02 * target);  // measured ~4e-7 relative
}

TEST_CASE("limit kernel reports the failing stage") {
    const Signal x = constant(64, 0.01, 1.0);
    // sigma small enough that a deep stage violates the floor but stage 1 is fine
    CHECK_THROWS_WITH_AS(smoothLimitKernel(x, 0.02, 2.0, 7), doctest::Contains("stage"), Error);
    CHECK(maxStableCascadeOrder(1.0, 2.0, 0.01) >= 5);
    CHECK(maxStableCascadeOrder(1e-5, 2.0, 0.01) == 0);
    CHECK_THROWS_AS(smoothLimitKernel(x, 1.0, 2.0, 0), Error);
}

TEST_CASE("causal kernels keep a zero prefix exactly") {
    std::mt19937_64 gen(7);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    Signal x;
    x.dt = 1e-3;
    x.samples.assign(600, 0.0);
    for (std::size_t i = 200; i < 600; ++i) x.samples[i] = u(gen);
    const Signal ye = smoothExponential(x, 0.03);
    const Signal yl = smoothLimitKernel(x, 0.03, 2.0, 4);
    for (std::size_t i = 0; i < 200; ++i) {
        CHECK(ye.samples[i] == 0.0);
        CHECK(yl.samples[i] == 0.0);
    }
}

TEST_CASE("exponential smoothing is exactly covariant under time rescaling") {
    const Signal x = toneMix(1000, 0.01);
    const Signal base = smoothExponential(x, 0.2);
    for (double s : {2.0, 4.0}) {
        Signal xs = x;
        xs.dt = x.dt * s;
        const Signal ys = smoothExponential(xs, 0.2 * s);
        for (std::size_t i = 0; i < x.samples.size(); ++i)
            CHECK(ys.samples[i] == base.samples[i]);
    }
}
