#pragma once

#include <cstdint>
#include <vector>

#include "spikelet/signal.hpp"
#include "spikelet/wavelets.hpp"

namespace spikelet {

struct SpikeEvent {
    std::uint64_t timeIndex = 0;
    std::int8_t polarity = 0;  // +1 or -1
};

struct SpikeTrain {
    std::size_t channel = 0;  // 0 = lowpass, 1..K = bandpass
    double theta = 0.0;
    double dt = 0.0;
    std::vector<SpikeEvent> events;
};

struct LifState {
    double uPlus = 0.0;
    double uMinus = 0.0;
    double mu = 0.0;
};

// Integrator time constant used to quantize a channel: bandpass channels sit at
// their passband center (sqrt(c) / peak frequency, which is the level time
// constant itself for DoE), the lowpass channel at the coarsest level.
double lifTimeConstant(const FilterBankSpec& spec, std::size_t channel);

// Two rectified leaky units integrate +x and -x; an event fires when a membrane
// reaches theta (>=), then the reset applies: soft subtracts theta, hard zeroes
// the membrane. At most one event per polarity per sample.
SpikeTrain encodeChannel(const Signal& x, double mu, double theta, ResetMode reset = ResetMode::Soft,
                         std::size_t channel = 0);

// One train per channel: index 0 is the lowpass, 1..K the bandpass channels.
std::vector<SpikeTrain> encode(const ChannelDecomposition& decomp, const FilterBankSpec& spec);

} // namespace spikelet
