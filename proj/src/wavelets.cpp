#include "spikelet/wavelets.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "spikelet/errors.hpp"

namespace spikelet {

namespace {

// Sampled impulse response of the family smoother at one grid level. For the
// causal families this is exactly what the discrete recursions produce for a
// unit impulse; for the Gaussian it is the (unit-sum) sampled kernel itself.
SampledKernel levelKernel(const FilterBankSpec& spec, double level) {
    SampledKernel out;
    out.dt = spec.dt;
    const double dt = spec.dt;
    switch (spec.family) {
        case WaveletFamily::DoG: {
            const double sigma = level;
            const auto r = static_cast<std::ptrdiff_t>(std::ceil(6.0 * sigma / dt));
            out.origin = r;
            out.samples.resize(static_cast<std::size_t>(2 * r + 1));
            double sum = 0.0;
            for (std::ptrdiff_t i = -r; i <= r; ++i) {
                const double t = static_cast<double>(i) * dt;
                const double v = std::exp(-t * t / (2.0 * sigma * sigma));
                out.samples[static_cast<std::size_t>(i + r)] = v;
                sum += v;
            }
            for (double& v : out.samples) v /= sum;
            return out;
        }
        case WaveletFamily::DoE: {
            const double mu = levelTimeConstant(spec, level);
            const double muMin = minTimeConstant(dt);
            if (mu < muMin)
                throw Error(errcode::kFloor, "bank: DoE time constant " + std::to_string(mu) +
                                                 " below stability floor " + std::to_string(muMin));
            const double alpha = std::exp(-dt / mu);
            const auto n = static_cast<std::size_t>(std::ceil(24.0 * std::max(mu, dt) / dt)) + 1;
            out.samples.resize(n);
            double h = 1.0 - alpha;
            for (std::size_t t = 0; t < n; ++t) {
                out.samples[t] = h;
                h *= alpha;
            }
            return out;
        }
        case WaveletFamily::DoT: {
            const double sigma = level;
            const std::size_t nEff = effectiveCascadeOrder(spec, level);
            const auto mus = limitKernelTimeConstants(sigma, spec.grid.c, nEff);
            double sumMu = 0.0;
            for (double m : mus) sumMu += m;
            const auto n =
                static_cast<std::size_t>(std::ceil((6.0 * sumMu + 24.0 * sigma) / dt)) + 1;
            out.samples.assign(n, 0.0);
            out.samples[0] = 1.0;
            for (double mu : mus) {
                const double alpha = std::exp(-dt / mu);
                double y = 0.0;
                for (std::size_t t = 0; t < n; ++t) {
                    y = alpha * y + (1.0 - alpha) * out.samples[t];
                    out.samples[t] = y;
                }
            }
            return out;
        }
    }
    throw Error(errcode::kConfig, "bank: unknown family");
}

// a - b with origins aligned.
SampledKernel subtractKernels(const SampledKernel& a, const SampledKernel& b) {
    const std::ptrdiff_t origin = std::max(a.origin, b.origin);
    const std::ptrdiff_t tailA = static_cast<std::ptrdiff_t>(a.samples.size()) - a.origin;
    const std::ptrdiff_t tailB = static_cast<std::ptrdiff_t>(b.samples.size()) - b.origin;
    const std::ptrdiff_t tail = std::max(tailA, tailB);
    SampledKernel out;
    out.dt = a.dt;
    out.origin = origin;
    out.samples.assign(static_cast<std::size_t>(origin + tail), 0.0);
    for (std::size_t i = 0; i < a.samples.size(); ++i)
        out.samples[static_cast<std::size_t>(static_cast<std::ptrdiff_t>(i) - a.origin + origin)] +=
            a.samples[i];
    for (std::size_t i = 0; i < b.samples.size(); ++i)
        out.samples[static_cast<std::size_t>(static_cast<std::ptrdiff_t>(i) - b.origin + origin)] -=
            b.samples[i];
    return out;
}

double euclidNorm(const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s += x * x;
    return std::sqrt(s);
}

std::complex<double> limitKernelTransfer(double sigma, double c, std::size_t n, double omega) {
    std::complex<double> p(1.0, 0.0);
    const double root = std::sqrt(c * c - 1.0) * sigma;
    for (std::size_t j = 1; j <= n; ++j) {
        const double mu = root * std::pow(c, -static_cast<double>(j));
        p /= std::complex<double>(1.0, mu * omega);
    }
    return p;
}

std::complex<double> levelTransfer(const FilterBankSpec& spec, double level, double omega) {
    switch (spec.family) {
        case WaveletFamily::DoG: {
            const double s = level * omega;
            return {std::exp(-0.5 * s * s), 0.0};
        }
        case WaveletFamily::DoE: {
            const double mu = levelTimeConstant(spec, level);
            return 1.0 / std::complex<double>(1.0, mu * omega);
        }
        case WaveletFamily::DoT:
            return limitKernelTransfer(level, spec.grid.c, spec.cascadeOrder, omega);
    }
    throw Error(errcode::kConfig, "bank: unknown family");
}

double channelMagnitudeSq(const FilterBankSpec& spec, std::size_t k, double omega) {
    const std::complex<double> v = levelTransfer(spec, spec.grid.levels[k], omega) -
                                   levelTransfer(spec, spec.grid.levels[k - 1], omega);
    return std::norm(v);
}

void checkChannelIndex(const FilterBankSpec& spec, std::size_t k) {
    if (k < 1 || k > spec.grid.K)
        throw Error(errcode::kRange, "bank: channel index " + std::to_string(k) +
                                         " outside 1.." + std::to_string(spec.grid.K));
}

} // namespace

double levelTimeConstant(const FilterBankSpec& spec, double level) {
    if (spec.family == WaveletFamily::DoE && spec.doeMu == DoeMuConvention::LimitDerived)
        return std::sqrt(spec.grid.c * spec.grid.c - 1.0) * level / spec.grid.c;
    return level;
}

std::size_t effectiveCascadeOrder(const FilterBankSpec& spec, double level) {
    if (spec.family != WaveletFamily::DoT) return 1;
    const std::size_t nMax = maxStableCascadeOrder(level, spec.grid.c, spec.dt);
    if (nMax == 0)
        throw Error(errcode::kFloor,
                    "bank: limit-kernel stage 1 unstable at level " + std::to_string(level));
    return std::min(spec.cascadeOrder, nMax);
}

Signal smoothAtLevel(const FilterBankSpec& spec, const Signal& in, double level) {
    switch (spec.family) {
        case WaveletFamily::DoG:
            return smoothGaussian(in, level);
        case WaveletFamily::DoE:
            return smoothExponential(in, levelTimeConstant(spec, level));
        case WaveletFamily::DoT:
            return smoothLimitKernel(in, level, spec.grid.c, effectiveCascadeOrder(spec, level));
    }
    throw Error(errcode::kConfig, "bank: unknown family");
}

FilterBankSpec makeFilterBank(WaveletFamily family, const ScaleGrid& grid, double dt,
                              std::size_t cascadeOrder, double theta, ResetMode reset,
                              DoeMuConvention doeMu) {
    if (!(dt > 0.0)) throw Error(errcode::kRange, "bank: dt must be positive");
    if (!(theta > 0.0)) throw Error(errcode::kRange, "bank: theta must be positive");
    if (family == WaveletFamily::DoT && cascadeOrder < 1)
        throw Error(errcode::kRange, "bank: cascade order must be at least 1");
    FilterBankSpec spec;
    spec.family = family;
    spec.grid = grid;
    spec.dt = dt;
    spec.cascadeOrder = cascadeOrder;
    spec.theta = theta;
    spec.reset = reset;
    spec.doeMu = doeMu;
    spec.channelNorms.resize(grid.K);
    for (std::size_t k = 1; k <= grid.K; ++k) {
        const SampledKernel lk = ladderImpulse(spec, k);
        const double n = euclidNorm(lk.samples);
        if (!(n > 0.0) || !std::isfinite(n))
            throw Error(errcode::kNumeric, "bank: channel " + std::to_string(k) +
                                               " has degenerate norm");
        spec.channelNorms[k - 1] = n;
    }
    return spec;
}

ChannelDecomposition analyze(const Signal& in, const FilterBankSpec& spec) {
    if (std::abs(in.dt - spec.dt) > 1e-9 * spec.dt)
        throw Error(errcode::kConfig, "analyze: signal dt does not match the bank");
    if (spec.channelNorms.size() != spec.grid.K)
        throw Error(errcode::kConfig, "analyze: bank has no channel norms (use makeFilterBank)");
    ChannelDecomposition d;
    d.bandpass.reserve(spec.grid.K);
    Signal prev = in;  // level 0 of the ladder is the signal itself (zero-scale)
    for (std::size_t k = 1; k <= spec.grid.K; ++k) {
        Signal cur = smoothAtLevel(spec, in, spec.grid.levels[k]);
        Signal delta;
        delta.dt = in.dt;
        delta.samples.resize(in.samples.size());
        const double inv = 1.0 / spec.channelNorms[k - 1];
        for (std::size_t t = 0; t < in.samples.size(); ++t)
            delta.samples[t] = (cur.samples[t] - prev.samples[t]) * inv;
        d.bandpass.push_back(std::move(delta));
        prev = std::move(cur);
    }
    d.lowpass = std::move(prev);
    return d;
}

Signal synthesize(const ChannelDecomposition& decomp, const FilterBankSpec& spec) {
    if (decomp.bandpass.size() != spec.grid.K)
        throw Error(errcode::kConfig, "synthesize: channel count mismatch");
    Signal out = decomp.lowpass;
    for (std::size_t k = 0; k < decomp.bandpass.size(); ++k) {
        const double norm = spec.channelNorms[k];
        const auto& bp = decomp.bandpass[k].samples;
        if (bp.size() != out.samples.size())
            throw Error(errcode::kConfig, "synthesize: channel length mismatch");
        for (std::size_t t = 0; t < bp.size(); ++t) out.samples[t] -= norm * bp[t];
    }
    return out;
}

SampledKernel waveletImpulse(const FilterBankSpec& spec, std::size_t k) {
    checkChannelIndex(spec, k);
    return subtractKernels(levelKernel(spec, spec.grid.levels[k]),
                           levelKernel(spec, spec.grid.levels[k - 1]));
}

SampledKernel ladderImpulse(const FilterBankSpec& spec, std::size_t k) {
    checkChannelIndex(spec, k);
    if (k >= 2) return waveletImpulse(spec, k);
    SampledKernel delta;
    delta.dt = spec.dt;
    delta.origin = 0;
    delta.samples = {1.0};
    return subtractKernels(levelKernel(spec, spec.grid.levels[1]), delta);
}

SampledKernel lowpassImpulse(const FilterBankSpec& spec) {
    return levelKernel(spec, spec.grid.levels.back());
}

std::vector<std::complex<double>> frequencyResponse(const FilterBankSpec& spec, std::size_t k,
                                                    const std::vector<double>& omega) {
    checkChannelIndex(spec, k);
    std::vector<std::complex<double>> out(omega.size());
    for (std::size_t i = 0; i < omega.size(); ++i) {
        if (omega[i] == 0.0) {
            out[i] = {0.0, 0.0};  // both smoothers have exact unit DC gain
            continue;
        }
        out[i] = levelTransfer(spec, spec.grid.levels[k], omega[i]) -
                 levelTransfer(spec, spec.grid.levels[k - 1], omega[i]);
    }
    return out;
}

std::vector<std::complex<double>> lowpassResponse(const FilterBankSpec& spec,
                                                  const std::vector<double>& omega) {
    std::vector<std::complex<double>> out(omega.size());
    for (std::size_t i = 0; i < omega.size(); ++i)
        out[i] = levelTransfer(spec, spec.grid.levels.back(), omega[i]);
    return out;
}

double peakFrequency(const FilterBankSpec& spec, std::size_t k) {
    checkChannelIndex(spec, k);
    const double c = spec.grid.c;
    const double level = spec.grid.levels[k];
    switch (spec.family) {
        case WaveletFamily::DoE:
            return std::sqrt(c) / levelTimeConstant(spec, level);
        case WaveletFamily::DoG:
            // maximum of exp(-s^2 u/2c^2) - exp(-s^2 u/2) in u = omega^2
            return (2.0 / level) * std::sqrt(std::log(c) / (1.0 - 1.0 / (c * c)));
        case WaveletFamily::DoT: {
            // golden-section search on log omega over a bracket spanning the passband;
            // at c = sqrt(2) the peak stays below c/(sqrt(c^2-1) sigma)
            const double muStage1 = std::sqrt(c * c - 1.0) * level / c;
            double lo = std::log(1e-3 / muStage1);
            double hi = std::log(10.0 / muStage1);
            const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
            double x1 = hi - gr * (hi - lo);
            double x2 = lo + gr * (hi - lo);
            double f1 = channelMagnitudeSq(spec, k, std::exp(x1));
            double f2 = channelMagnitudeSq(spec, k, std::exp(x2));
            while (hi - lo > 1e-9) {
                if (f1 < f2) {
                    lo = x1;
                    x1 = x2;
                    f1 = f2;
                    x2 = lo + gr * (hi - lo);
                    f2 = channelMagnitudeSq(spec, k, std::exp(x2));
                } else {
                    hi = x2;
                    x2 = x1;
                    f2 = f1;
                    x1 = hi - gr * (hi - lo);
                    f1 = channelMagnitudeSq(spec, k, std::exp(x1));
                }
            }
            return std::exp(0.5 * (lo + hi));
        }
    }
    throw Error(errcode::kConfig, "bank: unknown family");
}

Bandwidth3dB bandwidth3dB(const FilterBankSpec& spec, std::size_t k) {
    checkChannelIndex(spec, k);
    Bandwidth3dB bw;
    const double c = spec.grid.c;
    if (spec.family == WaveletFamily::DoE) {
        // |psi|^2 in u = (mu_k omega)^2 is half its maximum at the roots of
        // u^2 - (c^2+4c+1) u + c^2 = 0.
        const double mu = levelTimeConstant(spec, spec.grid.levels[k]);
        const double b = c * c + 4.0 * c + 1.0;
        const double disc = (c + 1.0) * std::sqrt(c * c + 6.0 * c + 1.0);
        const double uLo = 0.5 * (b - disc);
        const double uHi = 0.5 * (b + disc);
        bw.omegaLo = std::sqrt(uLo) / mu;
        bw.omegaHi = std::sqrt(uHi) / mu;
        bw.quality = std::sqrt(c) / (std::sqrt(uHi) - std::sqrt(uLo));
        return bw;
    }
    const double wPeak = peakFrequency(spec, k);
    const double half = 0.5 * channelMagnitudeSq(spec, k, wPeak);
    auto bisect = [&](double lo, double hi, bool rising) {
        for (int i = 0; i < 200; ++i) {
            const double mid = std::sqrt(lo * hi);
            const bool above = channelMagnitudeSq(spec, k, mid) > half;
            if (above == rising)
                hi = mid;
            else
                lo = mid;
            if (hi / lo < 1.0 + 1e-13) break;
        }
        return std::sqrt(lo * hi);
    };
    bw.omegaLo = bisect(wPeak * 1e-4, wPeak, true);
    bw.omegaHi = bisect(wPeak, wPeak * 1e4, false);
    bw.quality = wPeak / (bw.omegaHi - bw.omegaLo);
    return bw;
}

} // namespace spikelet
