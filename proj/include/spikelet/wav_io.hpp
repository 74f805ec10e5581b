#pragma once

#include <string>

#include "spikelet/signal.hpp"

namespace spikelet {

// Mono WAV. Reads PCM 16-bit (scaled to [-1, 1)) or IEEE float32; multi-channel
// files are averaged down to mono. Writes PCM 16-bit with clipping.
Signal readWavSignal(const std::string& path);

void writeWavSignal(const std::string& path, const Signal& s);

} // namespace spikelet
