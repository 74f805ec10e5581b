#pragma once

#include <complex>
#include <cstddef>
#include <vector>

#include "spikelet/kernels.hpp"
#include "spikelet/signal.hpp"

namespace spikelet {

enum class WaveletFamily { DoG, DoE, DoT };

// How DoE maps grid levels to time constants. Direct uses mu = level (the grid
// is a mu-grid); LimitDerived treats levels as sigmas and uses the degenerate
// single-stage limit-kernel constant mu = sqrt(c^2-1)*sigma/c.
enum class DoeMuConvention { Direct, LimitDerived };

enum class ResetMode { Soft, Hard };

struct FilterBankSpec {
    WaveletFamily family = WaveletFamily::DoE;
    ScaleGrid grid;
    double dt = 1.0;              // sample spacing the bank is realized on
    std::size_t cascadeOrder = 7; // requested limit-kernel stages (DoT only)
    double theta = 0.1;           // spike threshold
    ResetMode reset = ResetMode::Soft;
    DoeMuConvention doeMu = DoeMuConvention::Direct;
    std::vector<double> channelNorms;  // size K, Euclidean norms of the ladder kernels

    std::size_t channels() const { return grid.K; }
};

// Builds the bank and computes channel normalization constants from the sampled
// ladder impulse responses on the bank's dt grid.
FilterBankSpec makeFilterBank(WaveletFamily family, const ScaleGrid& grid, double dt,
                              std::size_t cascadeOrder = 7, double theta = 0.1,
                              ResetMode reset = ResetMode::Soft,
                              DoeMuConvention doeMu = DoeMuConvention::Direct);

// Time constant the level maps to: the level itself, except DoE under the
// limit-derived convention, where sigma maps to sqrt(c^2-1)*sigma/c.
double levelTimeConstant(const FilterBankSpec& spec, double level);

// Effective cascade order for a level's discrete realization: the requested
// order capped by the stability floor. Throws E_FLOOR if not even one stage fits.
std::size_t effectiveCascadeOrder(const FilterBankSpec& spec, double level);

// Smooths with the family kernel at the given grid level.
Signal smoothAtLevel(const FilterBankSpec& spec, const Signal& in, double level);

struct ChannelDecomposition {
    Signal lowpass;                // L at the coarsest level (not normalized)
    std::vector<Signal> bandpass;  // K channels, divided by channelNorms
};

// Multi-scale analysis. The ladder bases at the signal itself (level 0 is the
// zero-scale representation), so the channel sum telescopes exactly:
//   bandpass_k = (L(level_k) - L(level_{k-1})) / norm_k   with L(level_0) := f.
// Constant input yields bandpass channels that are zero in steady state; the
// causal families carry a decaying onset transient from the zero left padding
// (DoG's reflected boundary keeps them identically zero).
ChannelDecomposition analyze(const Signal& in, const FilterBankSpec& spec);

// Exact inverse of analyze: lowpass - sum_k norm_k * bandpass_k.
Signal synthesize(const ChannelDecomposition& decomp, const FilterBankSpec& spec);

// Sampled kernel with a time origin (origin = index of t = 0; nonzero for DoG,
// whose kernels are two-sided).
struct SampledKernel {
    std::vector<double> samples;
    std::ptrdiff_t origin = 0;
    double dt = 1.0;
};

// Idealized self-similar wavelet psi_k = h(level_k) - h(level_{k-1}), including
// k = 1 formed from (level_1, level_0). Used by frame/spectral diagnostics.
SampledKernel waveletImpulse(const FilterBankSpec& spec, std::size_t k);

// The kernel the analysis ladder actually applies for channel k. Identical to
// waveletImpulse for k >= 2; for k = 1 it is h(level_1) - delta because the
// ladder bases at the signal itself.
SampledKernel ladderImpulse(const FilterBankSpec& spec, std::size_t k);

// Sampled lowpass kernel h(level_K).
SampledKernel lowpassImpulse(const FilterBankSpec& spec);

// Closed-form continuous-domain transfer function of idealized channel k
// evaluated at angular frequencies omega. Exactly 0 at omega = 0.
std::vector<std::complex<double>> frequencyResponse(const FilterBankSpec& spec, std::size_t k,
                                                    const std::vector<double>& omega);

// Closed-form lowpass transfer function at the coarsest level.
std::vector<std::complex<double>> lowpassResponse(const FilterBankSpec& spec,
                                                  const std::vector<double>& omega);

// Angular frequency of the channel's magnitude peak. Closed form for DoE
// (sqrt(c)/mu_k) and DoG; golden-section search on log omega for DoT
// (rel. tol 1e-8). At c = sqrt(2) the DoT peak stays below
// c/(sqrt(c^2-1)*sigma_k); at larger c it can exceed that value.
double peakFrequency(const FilterBankSpec& spec, std::size_t k);

struct Bandwidth3dB {
    double omegaLo = 0.0;
    double omegaHi = 0.0;
    double quality = 0.0;  // omega_peak / (omega_hi - omega_lo)
};

// Half-power edges. Closed-form biquadratic roots for DoE; bisection against
// the closed-form magnitude for DoG/DoT.
Bandwidth3dB bandwidth3dB(const FilterBankSpec& spec, std::size_t k);

} // namespace spikelet
