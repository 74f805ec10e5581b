#pragma once

#include <string>

#include "spikelet/decoder.hpp"
#include "spikelet/wavelets.hpp"

namespace spikelet {

// Parsed config document (JSON, schema version 1). The grid ratio comes either
// from an explicit "c" or from a {"minHz","maxHz"} frequency range resolved
// through designRatio; exactly one of the two must be present.
struct BankConfig {
    WaveletFamily family = WaveletFamily::DoT;
    double c = 0.0;  // resolved ratio
    std::size_t K = 0;
    std::size_t cascadeOrder = 7;
    double theta = 0.1;
    double sampleRateHz = 0.0;
    ResetMode reset = ResetMode::Soft;
    DecodeMode decodeMode = DecodeMode::LeastSquares;
    DoeMuConvention doeMu = DoeMuConvention::Direct;
    bool fromFrequencyRange = false;
    double minHz = 0.0;
    double maxHz = 0.0;
};

// Loads and schema-validates; admissibility floors are enforced here, not at
// first use. Unknown keys are rejected to catch typos.
BankConfig loadBankConfig(const std::string& path);

// Realizes the bank on dt = 1/sampleRateHz. The finest level sits at the
// period of the band top: 1/(2*pi*maxHz), with maxHz = sampleRateHz/4 when the
// config gave an explicit ratio.
FilterBankSpec bankFromConfig(const BankConfig& cfg);

// One-line echo of the resolved configuration (includes c when the config was
// given as a frequency range).
std::string describeBankConfig(const BankConfig& cfg);

} // namespace spikelet
