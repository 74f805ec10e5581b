#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "spikelet/spike_codec.hpp"
#include "spikelet/wavelets.hpp"

namespace spikelet {

// Binary little-endian container for an encoded signal: a header carrying the
// full bank description (so a decoder can be rebuilt without the config file),
// the channel norms, the encoded sample count, then one 11-byte record per
// event (channel u16, polarity i8, timeIndex u64) sorted by (channel, time).
struct SpikeFileData {
    FilterBankSpec spec;
    std::uint64_t sampleCount = 0;
    std::vector<SpikeTrain> trains;  // index = channel, 0..K
};

void writeSpikeFile(const std::string& path, const FilterBankSpec& spec,
                    std::uint64_t sampleCount, const std::vector<SpikeTrain>& trains);

SpikeFileData readSpikeFile(const std::string& path);

} // namespace spikelet
