#pragma once

#include <cstdint>
#include <vector>

#include "spikelet/signal.hpp"
#include "spikelet/spike_codec.hpp"
#include "spikelet/wavelets.hpp"

namespace spikelet {

enum class DecodeMode { LeastSquares, IdentityWeights };

// Closed form of h_exp(muA) * h_exp(muB) at time t >= 0:
// (e^{-t/muA} - e^{-t/muB}) / (muA - muB), with the confluent limit
// t e^{-t/mu} / mu^2 when the constants coincide.
double composedExponential(double t, double muA, double muB);

// Amplitude a constant input must have had to fire after an interval delta,
// integrating through the normalized difference pair (mu1 < mu2). The interval
// is capped at the pair's peak lag, beyond which the constant-input model has
// no solution.
double identityWeightBandpass(double theta, double delta, double mu1, double mu2);

// Same for the lowpass channel, whose charge accumulates through the composed
// pair: I = theta / Phi(delta), Phi(delta) = 1 - (muA e^{-d/muA} - muB e^{-d/muB})/(muA - muB).
double identityWeightLowpass(double theta, double delta, double muA, double muB);

struct ReconstructionKernel {
    std::size_t channel = 0;  // 0 = lowpass, 1..K = bandpass
    double muR = 0.0;
    double muChannel = 0.0;   // the channel's own integrator constant
    double scaleRatio = 0.0;  // grid ratio c, fixes the identity-weight pair
    SampledKernel kernel;     // leaky integrator composed with the channel kernel
};

// Sampled r = h_exp(muR) * channelKernel, truncated where |r| stays below
// 1e-6 of its peak or at lag 10 * max(mu_channel, muR), whichever is shorter.
// muR <= 0 selects the default (the channel's own integrator constant).
ReconstructionKernel reconstructionKernel(const FilterBankSpec& spec, std::size_t channel,
                                          double muR = 0.0);

struct ChannelDecodeResult {
    Signal reconstructed;
    std::vector<double> weights;  // one per event
    double residualNorm = 0.0;    // ||target - reconstructed||, 0 without a target
    bool rankDeficient = false;
};

// Least squares fits per-spike weights against the channel's analysis output
// (target required); identity weights derive each spike's amplitude from its
// same-polarity inter-spike interval and need no target.
ChannelDecodeResult decodeChannel(const SpikeTrain& train, const Signal* target,
                                  const ReconstructionKernel& kernel, DecodeMode mode,
                                  std::size_t sampleCount);

struct ReconstructionReport {
    Signal reconstructed;
    std::vector<double> perChannelResidualNorms;  // channel 0..K, when targets given
    std::vector<std::size_t> spikeCounts;         // channel 0..K
    std::vector<std::vector<double>> weights;     // channel 0..K
    std::vector<std::uint8_t> rankDeficient;      // channel 0..K
    double nRMSE = 0.0;                           // vs reference, when given
};

ReconstructionReport decode(const std::vector<SpikeTrain>& trains, const FilterBankSpec& spec,
                            std::size_t sampleCount, DecodeMode mode,
                            const ChannelDecomposition* targets = nullptr,
                            const Signal* reference = nullptr);

} // namespace spikelet
