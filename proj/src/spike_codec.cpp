#include "spikelet/spike_codec.hpp"

#include <cmath>
#include <string>

#include "spikelet/errors.hpp"
#include "spikelet/kernels.hpp"
#include "spikelet/threading.hpp"

namespace spikelet {

double lifTimeConstant(const FilterBankSpec& spec, std::size_t channel) {
    if (channel == 0) return levelTimeConstant(spec, spec.grid.levels.back());
    return std::sqrt(spec.grid.c) / peakFrequency(spec, channel);
}

SpikeTrain encodeChannel(const Signal& x, double mu, double theta, ResetMode reset,
                         std::size_t channel) {
    if (!(theta > 0.0)) throw Error(errcode::kRange, "codec: theta must be positive");
    const double muMin = minTimeConstant(x.dt);
    if (mu < muMin)
        throw Error(errcode::kFloor, "codec: time constant " + std::to_string(mu) +
                                         " below stability floor " + std::to_string(muMin));
    SpikeTrain train;
    train.channel = channel;
    train.theta = theta;
    train.dt = x.dt;
    const double alpha = std::exp(-x.dt / mu);
    LifState st;
    st.mu = mu;
    for (std::size_t t = 0; t < x.samples.size(); ++t) {
        const double v = x.samples[t];
        st.uPlus = alpha * st.uPlus + (1.0 - alpha) * v;
        st.uMinus = alpha * st.uMinus + (1.0 - alpha) * (-v);
        if (!std::isfinite(st.uPlus) || !std::isfinite(st.uMinus))
            throw Error(errcode::kNumeric,
                        "codec: non-finite membrane at sample " + std::to_string(t));
        if (st.uPlus >= theta) {
            train.events.push_back({static_cast<std::uint64_t>(t), +1});
            st.uPlus = reset == ResetMode::Soft ? st.uPlus - theta : 0.0;
        }
        if (st.uMinus >= theta) {
            train.events.push_back({static_cast<std::uint64_t>(t), -1});
            st.uMinus = reset == ResetMode::Soft ? st.uMinus - theta : 0.0;
        }
    }
    return train;
}

std::vector<SpikeTrain> encode(const ChannelDecomposition& decomp, const FilterBankSpec& spec) {
    if (decomp.bandpass.size() != spec.grid.K)
        throw Error(errcode::kConfig, "codec: decomposition does not match the bank");
    std::vector<SpikeTrain> trains(spec.grid.K + 1);
    parallelFor(spec.grid.K + 1, [&](std::size_t ch) {
        const Signal& src = ch == 0 ? decomp.lowpass : decomp.bandpass[ch - 1];
        trains[ch] = encodeChannel(src, lifTimeConstant(spec, ch), spec.theta, spec.reset, ch);
    });
    return trains;
}

} // namespace spikelet
