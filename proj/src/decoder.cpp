#include "spikelet/decoder.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include <Eigen/Dense>

#include "spikelet/errors.hpp"
#include "spikelet/kernels.hpp"
#include "spikelet/threading.hpp"

namespace spikelet {

double composedExponential(double t, double muA, double muB) {
    if (!(muA > 0.0) || !(muB > 0.0))
        throw Error(errcode::kRange, "decoder: time constants must be positive");
    if (t < 0.0) return 0.0;
    if (std::abs(muA - muB) <= 1e-9 * std::max(muA, muB)) {
        const double mu = 0.5 * (muA + muB);
        return t * std::exp(-t / mu) / (mu * mu);
    }
    return (std::exp(-t / muA) - std::exp(-t / muB)) / (muA - muB);
}

double identityWeightBandpass(double theta, double delta, double mu1, double mu2) {
    if (!(theta > 0.0) || !(delta > 0.0))
        throw Error(errcode::kRange, "decoder: theta and delta must be positive");
    if (!(mu1 > 0.0) || !(mu2 > mu1))
        throw Error(errcode::kRange, "decoder: need 0 < mu1 < mu2");
    const double deltaPeak = std::log(mu2 / mu1) * mu1 * mu2 / (mu2 - mu1);
    const double d = std::min(delta, deltaPeak);
    const double cKappa = (mu2 - mu1) / (mu1 * mu2);
    return theta * cKappa / (std::exp(-d / mu2) - std::exp(-d / mu1));
}

double identityWeightLowpass(double theta, double delta, double muA, double muB) {
    if (!(theta > 0.0) || !(delta > 0.0))
        throw Error(errcode::kRange, "decoder: theta and delta must be positive");
    if (!(muA > 0.0) || !(muB > 0.0))
        throw Error(errcode::kRange, "decoder: time constants must be positive");
    double phi;
    if (std::abs(muA - muB) <= 1e-9 * std::max(muA, muB)) {
        const double x = delta / (0.5 * (muA + muB));
        phi = 1.0 - std::exp(-x) * (1.0 + x);
    } else {
        phi = 1.0 -
              (muA * std::exp(-delta / muA) - muB * std::exp(-delta / muB)) / (muA - muB);
    }
    return theta / phi;
}

ReconstructionKernel reconstructionKernel(const FilterBankSpec& spec, std::size_t channel,
                                          double muR) {
    if (channel > spec.grid.K)
        throw Error(errcode::kRange, "decoder: channel index out of range");
    if (muR <= 0.0) muR = lifTimeConstant(spec, channel);
    const double muMin = minTimeConstant(spec.dt);
    if (muR < muMin)
        throw Error(errcode::kFloor, "decoder: muR " + std::to_string(muR) +
                                         " below stability floor " + std::to_string(muMin));
    SampledKernel base;
    if (channel == 0) {
        base = lowpassImpulse(spec);
    } else {
        if (spec.channelNorms.size() != spec.grid.K)
            throw Error(errcode::kConfig, "decoder: bank has no channel norms");
        base = ladderImpulse(spec, channel);
        const double inv = 1.0 / spec.channelNorms[channel - 1];
        for (double& v : base.samples) v *= inv;
    }
    const double alpha = std::exp(-spec.dt / muR);
    const auto tail = static_cast<std::size_t>(std::ceil(24.0 * muR / spec.dt));
    ReconstructionKernel out;
    out.channel = channel;
    out.muR = muR;
    out.muChannel = lifTimeConstant(spec, channel);
    out.scaleRatio = spec.grid.c;
    out.kernel.dt = spec.dt;
    out.kernel.origin = base.origin;
    out.kernel.samples.assign(base.samples.size() + tail, 0.0);
    double y = 0.0;
    for (std::size_t t = 0; t < out.kernel.samples.size(); ++t) {
        const double in = t < base.samples.size() ? base.samples[t] : 0.0;
        y = alpha * y + (1.0 - alpha) * in;
        out.kernel.samples[t] = y;
    }
    double peak = 0.0;
    for (double v : out.kernel.samples) peak = std::max(peak, std::abs(v));
    if (!(peak > 0.0)) throw Error(errcode::kNumeric, "decoder: degenerate reconstruction kernel");
    const double floorVal = 1e-6 * peak;
    const auto capLag = static_cast<std::ptrdiff_t>(
        std::ceil(10.0 * std::max(out.muChannel, muR) / spec.dt));
    std::size_t end = out.kernel.samples.size();
    while (end > 1 && std::abs(out.kernel.samples[end - 1]) < floorVal) --end;
    const auto capEnd = static_cast<std::size_t>(
        std::max<std::ptrdiff_t>(out.kernel.origin + capLag + 1, 1));
    end = std::min(end, std::min(capEnd, out.kernel.samples.size()));
    out.kernel.samples.resize(end);
    std::size_t begin = 0;
    while (begin + 1 < out.kernel.samples.size() &&
           std::abs(out.kernel.samples[begin]) < floorVal &&
           static_cast<std::ptrdiff_t>(begin) < out.kernel.origin)
        ++begin;
    if (begin > 0) {
        out.kernel.samples.erase(out.kernel.samples.begin(),
                                 out.kernel.samples.begin() + static_cast<std::ptrdiff_t>(begin));
        out.kernel.origin -= static_cast<std::ptrdiff_t>(begin);
    }
    return out;
}

namespace {

// x~[t] = sum_i w_i p_i r[t - t_i + origin] over the signal window.
Signal renderTrain(const SpikeTrain& train, const ReconstructionKernel& rk,
                   const std::vector<double>& weights, std::size_t n, double dt) {
    Signal out;
    out.dt = dt;
    out.samples.assign(n, 0.0);
    const auto& r = rk.kernel.samples;
    const std::ptrdiff_t o = rk.kernel.origin;
    for (std::size_t i = 0; i < train.events.size(); ++i) {
        const auto ti = static_cast<std::ptrdiff_t>(train.events[i].timeIndex);
        const double w = weights[i] * train.events[i].polarity;
        const std::ptrdiff_t lo = std::max<std::ptrdiff_t>(0, ti - o);
        const std::ptrdiff_t hi =
            std::min<std::ptrdiff_t>(static_cast<std::ptrdiff_t>(n),
                                     ti - o + static_cast<std::ptrdiff_t>(r.size()));
        for (std::ptrdiff_t t = lo; t < hi; ++t)
            out.samples[static_cast<std::size_t>(t)] += w * r[static_cast<std::size_t>(t - ti + o)];
    }
    return out;
}

std::vector<double> leastSquaresWeights(const SpikeTrain& train, const Signal& target,
                                        const ReconstructionKernel& rk, bool& rankDeficient) {
    const std::size_t n = train.events.size();
    const auto& r = rk.kernel.samples;
    const std::ptrdiff_t o = rk.kernel.origin;
    const auto L = static_cast<std::ptrdiff_t>(r.size());
    // autocorrelation of the kernel; on the extended time axis every design
    // column is a complete copy, so A^T A reduces to rho at the lag differences
    std::vector<double> rho(r.size(), 0.0);
    for (std::size_t m = 0; m < r.size(); ++m)
        for (std::size_t u = 0; u + m < r.size(); ++u) rho[m] += r[u] * r[u + m];
    Eigen::MatrixXd m(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i; j < n; ++j) {
            const auto lag = static_cast<std::ptrdiff_t>(train.events[j].timeIndex) -
                             static_cast<std::ptrdiff_t>(train.events[i].timeIndex);
            const double v =
                lag < L ? rho[static_cast<std::size_t>(lag)] *
                              train.events[i].polarity * train.events[j].polarity
                        : 0.0;
            m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = v;
            m(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(i)) = v;
        }
    }
    const double lambda = 1e-8 * rho[0];
    for (std::size_t i = 0; i < n; ++i)
        m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)) += lambda;
    Eigen::VectorXd b(static_cast<Eigen::Index>(n));
    const auto T = static_cast<std::ptrdiff_t>(target.samples.size());
    for (std::size_t i = 0; i < n; ++i) {
        const auto ti = static_cast<std::ptrdiff_t>(train.events[i].timeIndex);
        const std::ptrdiff_t lo = std::max<std::ptrdiff_t>(0, ti - o);
        const std::ptrdiff_t hi = std::min<std::ptrdiff_t>(T, ti - o + L);
        double s = 0.0;
        for (std::ptrdiff_t t = lo; t < hi; ++t)
            s += r[static_cast<std::size_t>(t - ti + o)] * target.samples[static_cast<std::size_t>(t)];
        b(static_cast<Eigen::Index>(i)) = s * train.events[i].polarity;
    }
    Eigen::LDLT<Eigen::MatrixXd> ldlt(m);
    const Eigen::VectorXd w = ldlt.solve(b);
    const Eigen::VectorXd d = ldlt.vectorD();
    const double dMax = d.cwiseAbs().maxCoeff();
    const double dMin = d.minCoeff();
    rankDeficient = !(dMin > 1e-12 * dMax);
    return std::vector<double>(w.data(), w.data() + w.size());
}

std::vector<double> identityWeightsForTrain(const SpikeTrain& train,
                                            const ReconstructionKernel& rk) {
    std::vector<double> w(train.events.size());
    std::ptrdiff_t lastPlus = -1, lastMinus = -1;
    for (std::size_t i = 0; i < train.events.size(); ++i) {
        const auto t = static_cast<std::ptrdiff_t>(train.events[i].timeIndex);
        std::ptrdiff_t& last = train.events[i].polarity > 0 ? lastPlus : lastMinus;
        const double delta = static_cast<double>(t - last) * train.dt;
        last = t;
        if (rk.channel == 0)
            w[i] = identityWeightLowpass(train.theta, delta, rk.muChannel, rk.muR);
        else
            w[i] = identityWeightBandpass(train.theta, delta, rk.muChannel / rk.scaleRatio,
                                          rk.muChannel);
    }
    return w;
}

} // namespace

ChannelDecodeResult decodeChannel(const SpikeTrain& train, const Signal* target,
                                  const ReconstructionKernel& kernel, DecodeMode mode,
                                  std::size_t sampleCount) {
    if (target && target->samples.size() != sampleCount)
        throw Error(errcode::kConfig, "decoder: target length does not match sample count");
    for (const auto& ev : train.events)
        if (ev.timeIndex >= sampleCount)
            throw Error(errcode::kRange, "decoder: spike time index beyond signal end");
    ChannelDecodeResult res;
    if (train.events.empty()) {
        res.reconstructed.dt = kernel.kernel.dt;
        res.reconstructed.samples.assign(sampleCount, 0.0);
        if (target) {
            double s = 0.0;
            for (double v : target->samples) s += v * v;
            res.residualNorm = std::sqrt(s);
        }
        return res;
    }
    if (mode == DecodeMode::LeastSquares) {
        if (!target)
            throw Error(errcode::kConfig,
                        "decoder: least-squares mode needs the channel analysis target");
        res.weights = leastSquaresWeights(train, *target, kernel, res.rankDeficient);
    } else {
        res.weights = identityWeightsForTrain(train, kernel);
    }
    res.reconstructed = renderTrain(train, kernel, res.weights, sampleCount, kernel.kernel.dt);
    if (target) {
        double s = 0.0;
        for (std::size_t t = 0; t < sampleCount; ++t) {
            const double d = target->samples[t] - res.reconstructed.samples[t];
            s += d * d;
        }
        res.residualNorm = std::sqrt(s);
    }
    return res;
}

ReconstructionReport decode(const std::vector<SpikeTrain>& trains, const FilterBankSpec& spec,
                            std::size_t sampleCount, DecodeMode mode,
                            const ChannelDecomposition* targets, const Signal* reference) {
    const std::size_t K = spec.grid.K;
    if (trains.size() != K + 1)
        throw Error(errcode::kConfig, "decoder: expected " + std::to_string(K + 1) + " trains");
    if (mode == DecodeMode::LeastSquares && !targets)
        throw Error(errcode::kConfig, "decoder: least-squares mode needs analysis targets");
    if (targets && targets->bandpass.size() != K)
        throw Error(errcode::kConfig, "decoder: targets do not match the bank");
    ReconstructionReport rep;
    rep.perChannelResidualNorms.assign(K + 1, 0.0);
    rep.spikeCounts.assign(K + 1, 0);
    rep.weights.resize(K + 1);
    rep.rankDeficient.assign(K + 1, 0);
    std::vector<Signal> recon(K + 1);
    parallelFor(K + 1, [&](std::size_t ch) {
        const ReconstructionKernel rk = reconstructionKernel(spec, ch);
        const Signal* target =
            targets ? (ch == 0 ? &targets->lowpass : &targets->bandpass[ch - 1]) : nullptr;
        ChannelDecodeResult res = decodeChannel(trains[ch], target, rk, mode, sampleCount);
        rep.perChannelResidualNorms[ch] = res.residualNorm;
        rep.spikeCounts[ch] = trains[ch].events.size();
        rep.weights[ch] = std::move(res.weights);
        rep.rankDeficient[ch] = res.rankDeficient ? 1 : 0;
        recon[ch] = std::move(res.reconstructed);
    });
    rep.reconstructed.dt = spec.dt;
    rep.reconstructed.samples.assign(sampleCount, 0.0);
    for (std::size_t t = 0; t < sampleCount; ++t) {
        double v = recon[0].samples[t];
        for (std::size_t k = 1; k <= K; ++k)
            v -= spec.channelNorms[k - 1] * recon[k].samples[t];
        rep.reconstructed.samples[t] = v;
    }
    if (reference) {
        if (reference->samples.size() != sampleCount)
            throw Error(errcode::kConfig, "decoder: reference length mismatch");
        rep.nRMSE = nrmse(reference->samples, rep.reconstructed.samples);
    }
    return rep;
}

} // namespace spikelet
