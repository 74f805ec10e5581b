#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "spikelet/decoder.hpp"
#include "spikelet/signal.hpp"
#include "spikelet/wavelets.hpp"

namespace spikelet {

enum class WaveletKind { DoG, DoE, DoT, Haar, Morlet, Szu };

enum class RunMode { Exact, Spiking };

enum class CorpusKind { EcgBurst, Chirp, Boxcar, BandlimitedNoise };

const char* waveletKindName(WaveletKind kind);
const char* corpusKindName(CorpusKind kind);

// Standardizes to zero mean and unit population variance. Constant input has
// no standardization and throws E_RANGE.
Signal zScore(const Signal& s);

// Deterministic synthetic windows (same seed, same bits). ecgBurst: periodic
// sharp biphasic pulses with jittered timing plus slow baseline wander.
// chirp: logarithmic sine sweep from 1 Hz to 3/8 rateHz. boxcar: one
// rectangular pulse with jittered onset/width. bandlimitedNoise: sum of
// sinusoids with log-spaced random frequencies below rateHz/5.
std::vector<Signal> syntheticCorpus(CorpusKind kind, double seconds, double rateHz,
                                    std::uint64_t seed, std::size_t count);

// Geometric grid placed against a sample rate: the finest level maps to the
// period of rateHz/4, level1 = 1/(2*pi*rateHz/4), so the finest channel peaks
// near the top of the usable band.
ScaleGrid gridForRate(double rateHz, double c, std::size_t K);

struct ExperimentConfig {
    WaveletKind wavelet = WaveletKind::DoT;
    double c = 2.0;
    std::size_t K = 8;
    std::size_t cascadeOrder = 7;
    double theta = 0.1;
    double sampleRateHz = 360.0;
    double windowSeconds = 1.0;
    RunMode mode = RunMode::Exact;
    DecodeMode decodeMode = DecodeMode::LeastSquares;
    ResetMode reset = ResetMode::Soft;
    DoeMuConvention doeMu = DoeMuConvention::Direct;
    CorpusKind corpus = CorpusKind::EcgBurst;
    std::uint64_t seed = 1;
    std::size_t windows = 20;
    std::vector<Signal> inputs;  // when nonempty, used instead of the corpus
};

struct ResultRow {
    std::string wavelet;
    std::string config;
    double meanNRMSE = 0.0;
    double stdNRMSE = 0.0;
    double meanSpikesPerSecond = 0.0;  // dense coefficient rate for CWT/Haar rows
    std::size_t windowCount = 0;
    std::vector<double> windowNRMSE;   // per window, keyed by window index
};

struct ResultTable {
    std::vector<ResultRow> rows;
};

// Per window: z-score, analyze, then either exact synthesis or spiking
// encode/decode; windows run in parallel with results keyed by index.
// Haar/Morlet/Szu rows are exact-mode only and reject spiking configs.
ResultRow runExperiment(const ExperimentConfig& config);

struct SweepPoint {
    double theta = 0.0;
    double meanNRMSE = 0.0;
    double meanSpikesPerSecond = 0.0;
};

struct SweepResult {
    std::vector<SweepPoint> points;
    double slope = 0.0;      // affine fit meanNRMSE ~ slope*theta + intercept
    double intercept = 0.0;
    double r2 = 0.0;
};

// Reruns the experiment per threshold (>= 4 positive values, spiking mode)
// and fits nRMSE affinely against theta.
SweepResult thresholdSweep(const ExperimentConfig& config, const std::vector<double>& thetas);

std::string formatResultTable(const ResultTable& table);
void writeResultTableCsv(const std::string& path, const ResultTable& table);
void writeSweepCsv(const std::string& path, const SweepResult& sweep);
void writeSweepSvg(const std::string& path, const SweepResult& sweep);

} // namespace spikelet
