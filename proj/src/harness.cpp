#include "spikelet/harness.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <random>
#include <sstream>

#include "spikelet/baselines.hpp"
#include "spikelet/csv_io.hpp"
#include "spikelet/errors.hpp"
#include "spikelet/spike_codec.hpp"
#include "spikelet/svg.hpp"
#include "spikelet/threading.hpp"

namespace spikelet {

namespace {

double uniform01(std::mt19937_64& gen) {
    // bit-stable uniform in [0,1); distributions are left out on purpose so the
    // corpus is identical across standard libraries
    return static_cast<double>(gen() >> 11) * 0x1.0p-53;
}

double uniformIn(std::mt19937_64& gen, double lo, double hi) {
    return lo + (hi - lo) * uniform01(gen);
}

Signal makeWindow(CorpusKind kind, double seconds, double rateHz, std::mt19937_64& gen) {
    const double dt = 1.0 / rateHz;
    const auto n = static_cast<std::size_t>(std::llround(seconds * rateHz));
    Signal s;
    s.dt = dt;
    s.samples.assign(n, 0.0);
    switch (kind) {
    case CorpusKind::EcgBurst: {
        // periodic sharp pulses over a faint baseline wander; pulse width and
        // spacing sized so the burst energy lives in the upper grid channels
        const double phase1 = uniformIn(gen, 0.0, 2.0 * M_PI);
        const double phase2 = uniformIn(gen, 0.0, 2.0 * M_PI);
        double beat = uniformIn(gen, 0.05, 0.55);
        std::vector<double> beats, amps;
        while (beat < seconds + 0.4) {
            beats.push_back(beat);
            amps.push_back(uniformIn(gen, 0.9, 1.1));
            beat += uniformIn(gen, 0.9, 1.1);
        }
        const double wander = 0.01, sigmaR = 0.008;
        for (std::size_t i = 0; i < n; ++i) {
            const double t = static_cast<double>(i) * dt;
            double v = wander * std::sin(2.0 * M_PI * 0.33 * t + phase1) +
                       0.67 * wander * std::sin(2.0 * M_PI * 0.15 * t + phase2);
            for (std::size_t b = 0; b < beats.size(); ++b) {
                const double u = (t - beats[b]) / sigmaR;
                // biphasic pulse: Gaussian second derivative, sharp center lobe
                if (std::abs(u) < 8.0) v += amps[b] * (1.0 - u * u) * std::exp(-0.5 * u * u);
            }
            s.samples[i] = v;
        }
        break;
    }
    case CorpusKind::Chirp: {
        // sweep past rate/4 so the finest channel's peak (sqrt(c) above the
        // band anchor) still sees on-sweep content
        const double f0 = 1.0, f1 = rateHz * 0.375;
        const double span = std::log(f1 / f0);
        const double amp = uniformIn(gen, 0.8, 1.2);
        const double phase = uniformIn(gen, 0.0, 2.0 * M_PI);
        for (std::size_t i = 0; i < n; ++i) {
            const double t = static_cast<double>(i) * dt;
            const double ph =
                2.0 * M_PI * f0 * seconds / span * (std::exp(t / seconds * span) - 1.0);
            s.samples[i] = amp * std::sin(ph + phase);
        }
        break;
    }
    case CorpusKind::Boxcar: {
        const double onset = uniformIn(gen, 0.15, 0.45) * seconds;
        const double width = uniformIn(gen, 0.2, 0.35) * seconds;
        const double amp = uniformIn(gen, 0.8, 1.2);
        for (std::size_t i = 0; i < n; ++i) {
            const double t = static_cast<double>(i) * dt;
            s.samples[i] = (t >= onset && t < onset + width) ? amp : 0.0;
        }
        break;
    }
    case CorpusKind::BandlimitedNoise: {
        // flat comb of incommensurate tones, log-uniform across the band
        const std::size_t tones = 24;
        const double fLo = 2.0, fHi = rateHz / 5.0;
        std::vector<double> freq(tones), amp(tones), phase(tones);
        for (std::size_t j = 0; j < tones; ++j) {
            freq[j] = fLo * std::exp(uniform01(gen) * std::log(fHi / fLo));
            amp[j] = uniformIn(gen, 0.5, 1.0);
            phase[j] = uniformIn(gen, 0.0, 2.0 * M_PI);
        }
        for (std::size_t i = 0; i < n; ++i) {
            const double t = static_cast<double>(i) * dt;
            double v = 0.0;
            for (std::size_t j = 0; j < tones; ++j)
                v += amp[j] * std::sin(2.0 * M_PI * freq[j] * t + phase[j]);
            s.samples[i] = v;
        }
        break;
    }
    }
    return s;
}

struct WindowOutcome {
    double nrmseValue = 0.0;
    double events = 0.0;
    double seconds = 0.0;
};

// desk-scale cap: dense CWT solves stay under the baselines guard
constexpr std::size_t kCwtWindowCap = 4096;

std::string describeConfig(const ExperimentConfig& cfg) {
    std::ostringstream os;
    os << "c=" << cfg.c << ",K=" << cfg.K << ",rate=" << cfg.sampleRateHz
       << ",mode=" << (cfg.mode == RunMode::Exact ? "exact" : "spiking");
    if (cfg.mode == RunMode::Spiking) {
        os << ",theta=" << cfg.theta
           << ",decode=" << (cfg.decodeMode == DecodeMode::LeastSquares ? "lstsq" : "identity");
    }
    return os.str();
}

} // namespace

const char* waveletKindName(WaveletKind kind) {
    switch (kind) {
    case WaveletKind::DoG: return "DoG";
    case WaveletKind::DoE: return "DoE";
    case WaveletKind::DoT: return "DoT";
    case WaveletKind::Haar: return "Haar";
    case WaveletKind::Morlet: return "Morlet";
    case WaveletKind::Szu: return "Szu";
    }
    return "?";
}

const char* corpusKindName(CorpusKind kind) {
    switch (kind) {
    case CorpusKind::EcgBurst: return "ecgBurst";
    case CorpusKind::Chirp: return "chirp";
    case CorpusKind::Boxcar: return "boxcar";
    case CorpusKind::BandlimitedNoise: return "bandlimitedNoise";
    }
    return "?";
}

Signal zScore(const Signal& s) {
    if (s.samples.empty()) throw Error(errcode::kRange, "zscore: empty signal");
    const double m = mean(s.samples);
    const double sd = stddev(s.samples);
    if (!(sd > 0.0)) throw Error(errcode::kRange, "zscore: constant signal has no standardization");
    Signal out;
    out.dt = s.dt;
    out.samples.resize(s.samples.size());
    for (std::size_t i = 0; i < s.samples.size(); ++i) out.samples[i] = (s.samples[i] - m) / sd;
    return out;
}

std::vector<Signal> syntheticCorpus(CorpusKind kind, double seconds, double rateHz,
                                    std::uint64_t seed, std::size_t count) {
    if (!(seconds > 0.0) || !(rateHz > 0.0))
        throw Error(errcode::kRange, "corpus: seconds and rateHz must be positive");
    if (seconds * rateHz > 1e7) throw Error(errcode::kGuard, "corpus: window exceeds 1e7 samples");
    std::vector<Signal> out;
    out.reserve(count);
    for (std::size_t w = 0; w < count; ++w) {
        // one engine per window so corpora are prefix-stable in count
        std::mt19937_64 gen(seed * 0x9e3779b97f4a7c15ULL + w + 1);
        out.push_back(makeWindow(kind, seconds, rateHz, gen));
    }
    return out;
}

ScaleGrid gridForRate(double rateHz, double c, std::size_t K) {
    if (!(rateHz > 0.0)) throw Error(errcode::kRange, "grid: rateHz must be positive");
    const double level1 = 1.0 / (2.0 * M_PI * rateHz / 4.0);
    return makeScaleGrid(level1, c, K);
}

ResultRow runExperiment(const ExperimentConfig& config) {
    const bool bankFamily = config.wavelet == WaveletKind::DoG ||
                            config.wavelet == WaveletKind::DoE ||
                            config.wavelet == WaveletKind::DoT;
    if (!bankFamily && config.mode == RunMode::Spiking)
        throw Error(errcode::kConfig, "experiment: baseline wavelets run in exact mode only");

    std::vector<Signal> windows =
        config.inputs.empty() ? syntheticCorpus(config.corpus, config.windowSeconds,
                                                config.sampleRateHz, config.seed, config.windows)
                              : config.inputs;
    if (windows.empty()) throw Error(errcode::kConfig, "experiment: no input windows");
    const double dt = 1.0 / config.sampleRateHz;

    FilterBankSpec spec;
    DenseCwtBank cwt;
    const ScaleGrid grid = gridForRate(config.sampleRateHz, config.c, config.K);
    if (bankFamily) {
        const WaveletFamily fam = config.wavelet == WaveletKind::DoG ? WaveletFamily::DoG
                                  : config.wavelet == WaveletKind::DoE ? WaveletFamily::DoE
                                                                       : WaveletFamily::DoT;
        spec = makeFilterBank(fam, grid, dt, config.cascadeOrder, config.theta, config.reset,
                              config.doeMu);
    } else if (config.wavelet == WaveletKind::Morlet || config.wavelet == WaveletKind::Szu) {
        cwt = makeCwtBank(config.wavelet == WaveletKind::Morlet ? CwtFamily::Morlet
                                                                : CwtFamily::Szu,
                          grid, dt);
    }

    const bool cwtRow = config.wavelet == WaveletKind::Morlet || config.wavelet == WaveletKind::Szu;
    std::vector<WindowOutcome> outcomes(windows.size());
    parallelFor(windows.size(), [&](std::size_t w) {
        Signal win = windows[w];
        if (cwtRow && win.samples.size() > kCwtWindowCap) win.samples.resize(kCwtWindowCap);
        Signal z = zScore(win);
        if (std::abs(z.dt - dt) > 1e-9 * dt)
            throw Error(errcode::kConfig, "experiment: window sample rate differs from config");
        WindowOutcome& res = outcomes[w];
        res.seconds = z.duration();
        if (config.wavelet == WaveletKind::Haar) {
            std::size_t maxLevels = 0;
            while ((std::size_t{1} << (maxLevels + 1)) <= z.samples.size()) ++maxLevels;
            const std::size_t levels = std::max<std::size_t>(1, std::min(config.K, maxLevels));
            HaarTransform tr = haarRoundTrip(z, levels);
            res.nrmseValue = nrmse(z.samples, tr.reconstructed.samples);
            res.events = static_cast<double>(tr.coefficients.size());
        } else if (!bankFamily) {
            ReconstructionReport rep = cwtEncodeDecode(z, cwt);
            res.nrmseValue = rep.nRMSE;
            double total = 0.0;
            for (std::size_t cnt : rep.spikeCounts) total += static_cast<double>(cnt);
            res.events = total;
        } else if (config.mode == RunMode::Exact) {
            ChannelDecomposition d = analyze(z, spec);
            Signal rec = synthesize(d, spec);
            res.nrmseValue = nrmse(z.samples, rec.samples);
            res.events = 0.0;
        } else {
            ChannelDecomposition d = analyze(z, spec);
            std::vector<SpikeTrain> trains = encode(d, spec);
            ReconstructionReport rep =
                decode(trains, spec, z.samples.size(), config.decodeMode, &d, &z);
            res.nrmseValue = rep.nRMSE;
            double total = 0.0;
            for (std::size_t cnt : rep.spikeCounts) total += static_cast<double>(cnt);
            res.events = total;
        }
    });

    ResultRow row;
    row.wavelet = waveletKindName(config.wavelet);
    row.config = describeConfig(config);
    row.windowCount = windows.size();
    row.windowNRMSE.resize(windows.size());
    double evTotal = 0.0, secTotal = 0.0;
    std::vector<double> errs(windows.size());
    for (std::size_t w = 0; w < windows.size(); ++w) {
        errs[w] = outcomes[w].nrmseValue;
        row.windowNRMSE[w] = outcomes[w].nrmseValue;
        evTotal += outcomes[w].events;
        secTotal += outcomes[w].seconds;
    }
    row.meanNRMSE = mean(errs);
    row.stdNRMSE = stddev(errs);
    row.meanSpikesPerSecond = secTotal > 0.0 ? evTotal / secTotal : 0.0;
    return row;
}

SweepResult thresholdSweep(const ExperimentConfig& config, const std::vector<double>& thetas) {
    if (thetas.size() < 4)
        throw Error(errcode::kRange, "sweep: need at least 4 threshold values");
    for (double th : thetas)
        if (!(th > 0.0)) throw Error(errcode::kRange, "sweep: thresholds must be positive");
    if (config.mode != RunMode::Spiking)
        throw Error(errcode::kConfig, "sweep: threshold sweeps require spiking mode");
    SweepResult out;
    for (double th : thetas) {
        ExperimentConfig cfg = config;
        cfg.theta = th;
        ResultRow row = runExperiment(cfg);
        out.points.push_back({th, row.meanNRMSE, row.meanSpikesPerSecond});
    }
    const auto n = static_cast<double>(out.points.size());
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    for (const auto& p : out.points) {
        sx += p.theta;
        sy += p.meanNRMSE;
        sxx += p.theta * p.theta;
        sxy += p.theta * p.meanNRMSE;
    }
    const double denom = n * sxx - sx * sx;
    if (std::abs(denom) < 1e-30) throw Error(errcode::kNumeric, "sweep: degenerate theta grid");
    out.slope = (n * sxy - sx * sy) / denom;
    out.intercept = (sy - out.slope * sx) / n;
    double ssRes = 0.0, ssTot = 0.0;
    const double my = sy / n;
    for (const auto& p : out.points) {
        const double fit = out.slope * p.theta + out.intercept;
        ssRes += (p.meanNRMSE - fit) * (p.meanNRMSE - fit);
        ssTot += (p.meanNRMSE - my) * (p.meanNRMSE - my);
    }
    out.r2 = ssTot > 0.0 ? 1.0 - ssRes / ssTot : 1.0;
    return out;
}

std::string formatResultTable(const ResultTable& table) {
    std::ostringstream os;
    char line[256];
    std::snprintf(line, sizeof(line), "%-8s %-44s %12s %12s %14s %8s\n", "wavelet", "config",
                  "meanNRMSE", "stdNRMSE", "spikes/s", "windows");
    os << line;
    for (const auto& r : table.rows) {
        std::snprintf(line, sizeof(line), "%-8s %-44s %12.6f %12.6f %14.2f %8zu\n",
                      r.wavelet.c_str(), r.config.c_str(), r.meanNRMSE, r.stdNRMSE,
                      r.meanSpikesPerSecond, r.windowCount);
        os << line;
    }
    return os.str();
}

namespace {

std::string fmtNum(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

} // namespace

void writeResultTableCsv(const std::string& path, const ResultTable& table) {
    std::vector<std::vector<std::string>> rows;
    for (const auto& r : table.rows) {
        // config strings contain commas; keep the cell quoted
        rows.push_back({r.wavelet, "\"" + r.config + "\"", fmtNum(r.meanNRMSE),
                        fmtNum(r.stdNRMSE), fmtNum(r.meanSpikesPerSecond),
                        std::to_string(r.windowCount)});
    }
    writeCsvTable(path, {"wavelet", "config", "meanNRMSE", "stdNRMSE", "meanSpikesPerSecond",
                         "windows"},
                  rows);
}

void writeSweepCsv(const std::string& path, const SweepResult& sweep) {
    std::vector<std::vector<std::string>> rows;
    for (const auto& p : sweep.points)
        rows.push_back({fmtNum(p.theta), fmtNum(p.meanNRMSE), fmtNum(p.meanSpikesPerSecond)});
    writeCsvTable(path, {"theta", "meanNRMSE", "meanSpikesPerSecond"}, rows);
}

void writeSweepSvg(const std::string& path, const SweepResult& sweep) {
    SvgSeries measured, fitted;
    measured.label = "meanNRMSE";
    measured.color = "#1f6fb2";
    fitted.label = "affine fit";
    fitted.color = "#c23b22";
    for (const auto& p : sweep.points) {
        measured.x.push_back(p.theta);
        measured.y.push_back(p.meanNRMSE);
        fitted.x.push_back(p.theta);
        fitted.y.push_back(sweep.slope * p.theta + sweep.intercept);
    }
    writeSvgPlot(path, "reconstruction error vs spike threshold", {measured, fitted}, false,
                 false);
}

} // namespace spikelet
