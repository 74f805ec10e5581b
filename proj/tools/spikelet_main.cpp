#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "spikelet/bank_config.hpp"
#include "spikelet/baselines.hpp"
#include "spikelet/csv_io.hpp"
#include "spikelet/decoder.hpp"
#include "spikelet/errors.hpp"
#include "spikelet/frames.hpp"
#include "spikelet/harness.hpp"
#include "spikelet/spike_codec.hpp"
#include "spikelet/spike_file.hpp"
#include "spikelet/svg.hpp"
#include "spikelet/wav_io.hpp"
#include "spikelet/wavelets.hpp"

namespace {

using namespace spikelet;

bool hasSuffix(const std::string& s, const std::string& suffix) {
    return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

Signal readInputSignal(const std::string& path, double rateHz) {
    if (hasSuffix(path, ".wav")) {
        Signal s = readWavSignal(path);
        const double fileRate = 1.0 / s.dt;
        if (std::abs(fileRate - rateHz) > 1e-6 * rateHz)
            throw Error(errcode::kConfig, "input sample rate " + std::to_string(fileRate) +
                                              " Hz differs from configured " +
                                              std::to_string(rateHz) + " Hz");
        return s;
    }
    return readCsvSignal(path, 1.0 / rateHz);
}

void writeOutputSignal(const std::string& path, const Signal& s) {
    if (hasSuffix(path, ".wav")) writeWavSignal(path, s);
    else writeCsvSignal(path, s);
}

std::vector<Signal> sliceWindows(const Signal& s, double windowSeconds) {
    const auto win = static_cast<std::size_t>(std::llround(windowSeconds / s.dt));
    std::vector<Signal> out;
    if (win == 0 || s.samples.size() < win) {
        out.push_back(s);
        return out;
    }
    for (std::size_t start = 0; start + win <= s.samples.size(); start += win) {
        Signal w;
        w.dt = s.dt;
        w.samples.assign(s.samples.begin() + static_cast<std::ptrdiff_t>(start),
                         s.samples.begin() + static_cast<std::ptrdiff_t>(start + win));
        out.push_back(std::move(w));
    }
    return out;
}

WaveletKind familyToKind(WaveletFamily f) {
    switch (f) {
    case WaveletFamily::DoG: return WaveletKind::DoG;
    case WaveletFamily::DoE: return WaveletKind::DoE;
    case WaveletFamily::DoT: return WaveletKind::DoT;
    }
    return WaveletKind::DoT;
}

CorpusKind parseCorpus(const std::string& name) {
    if (name == "ecgBurst") return CorpusKind::EcgBurst;
    if (name == "chirp") return CorpusKind::Chirp;
    if (name == "boxcar") return CorpusKind::Boxcar;
    if (name == "bandlimitedNoise") return CorpusKind::BandlimitedNoise;
    throw Error(errcode::kConfig,
                "corpus must be one of ecgBurst|chirp|boxcar|bandlimitedNoise, got " + name);
}

WaveletKind parseWaveletKind(const std::string& name) {
    if (name == "dog") return WaveletKind::DoG;
    if (name == "doe") return WaveletKind::DoE;
    if (name == "dot") return WaveletKind::DoT;
    if (name == "haar") return WaveletKind::Haar;
    if (name == "morlet") return WaveletKind::Morlet;
    if (name == "szu") return WaveletKind::Szu;
    throw Error(errcode::kConfig, "wavelet must be one of dog|doe|dot|haar|morlet|szu, got " + name);
}

std::string fmtNum(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

int cmdAnalyze(const std::string& configPath, const std::string& outputPrefix) {
    const BankConfig cfg = loadBankConfig(configPath);
    const FilterBankSpec spec = bankFromConfig(cfg);
    const FrameReport report = frameReport(spec);

    std::ostringstream txt;
    txt << "filter bank analysis\n";
    txt << "config: " << describeBankConfig(cfg) << "\n";
    txt << "frame bounds: A=" << fmtNum(report.A) << " B=" << fmtNum(report.B) << "\n";
    txt << "evaluation range (rad/s): [" << fmtNum(report.omegaLo) << ", "
        << fmtNum(report.omegaHi) << "]\n";
    txt << "gram condition number: " << fmtNum(report.conditionNumber) << "\n";
    txt << "gram min eigenvalue: " << fmtNum(report.gramMinEigenvalue) << "\n";
    txt << "channels:\n";
    txt << "  k   level           peak(rad/s)     peak(Hz)        Q\n";
    for (std::size_t k = 1; k <= spec.grid.K; ++k) {
        const double peak = peakFrequency(spec, k);
        const Bandwidth3dB bw = bandwidth3dB(spec, k);
        char line[200];
        std::snprintf(line, sizeof(line), "  %-3zu %-15.8g %-15.8g %-15.8g %-15.8g\n", k,
                      spec.grid.levels[k], peak, peak / (2.0 * M_PI), bw.quality);
        txt << line;
    }
    std::ofstream rpt(outputPrefix + "_frame_report.txt", std::ios::binary);
    if (!rpt) throw Error(errcode::kIo, "cannot write " + outputPrefix + "_frame_report.txt");
    rpt << txt.str();
    rpt.close();

    // gram CSV
    {
        std::vector<std::string> header;
        for (std::size_t k = 1; k <= spec.grid.K; ++k) header.push_back("k" + std::to_string(k));
        std::vector<std::vector<std::string>> rows;
        for (Eigen::Index i = 0; i < report.gram.rows(); ++i) {
            std::vector<std::string> row;
            for (Eigen::Index j = 0; j < report.gram.cols(); ++j)
                row.push_back(fmtNum(report.gram(i, j)));
            rows.push_back(std::move(row));
        }
        writeCsvTable(outputPrefix + "_gram.csv", header, rows);
    }

    // frequency responses and energy capture on the report grid
    const std::vector<double>& omega = report.energyCurve.omega;
    std::vector<std::vector<double>> mags(spec.grid.K + 1);
    {
        const auto low = lowpassResponse(spec, omega);
        mags[0].resize(omega.size());
        for (std::size_t i = 0; i < omega.size(); ++i) mags[0][i] = std::abs(low[i]);
        for (std::size_t k = 1; k <= spec.grid.K; ++k) {
            const auto resp = frequencyResponse(spec, k, omega);
            mags[k].resize(omega.size());
            for (std::size_t i = 0; i < omega.size(); ++i) mags[k][i] = std::abs(resp[i]);
        }
        std::vector<std::string> header = {"omega", "S"};
        if (!report.energyCurve.sTelescoped.empty()) header.push_back("S_telescoped");
        header.push_back("lowpass");
        for (std::size_t k = 1; k <= spec.grid.K; ++k) header.push_back("k" + std::to_string(k));
        std::vector<std::vector<std::string>> rows;
        for (std::size_t i = 0; i < omega.size(); ++i) {
            std::vector<std::string> row = {fmtNum(omega[i]), fmtNum(report.energyCurve.s[i])};
            if (!report.energyCurve.sTelescoped.empty())
                row.push_back(fmtNum(report.energyCurve.sTelescoped[i]));
            for (std::size_t k = 0; k <= spec.grid.K; ++k) row.push_back(fmtNum(mags[k][i]));
            rows.push_back(std::move(row));
        }
        writeCsvTable(outputPrefix + "_response.csv", header, rows);
    }

    // SVG plots
    {
        static const char* palette[] = {"#1f6fb2", "#c23b22", "#2b8a3e", "#8c4fb2",
                                        "#b26f1f", "#1fb2a5", "#b21f6f", "#6fb21f"};
        std::vector<SvgSeries> series;
        SvgSeries low;
        low.label = "lowpass";
        low.color = "#555555";
        low.x = omega;
        low.y = mags[0];
        series.push_back(std::move(low));
        for (std::size_t k = 1; k <= spec.grid.K; ++k) {
            SvgSeries srs;
            srs.label = "k" + std::to_string(k);
            srs.color = palette[(k - 1) % 8];
            srs.x = omega;
            srs.y = mags[k];
            series.push_back(std::move(srs));
        }
        writeSvgPlot(outputPrefix + "_response.svg", "channel magnitude responses", series, true,
                     false);
        SvgSeries energy;
        energy.label = "S";
        energy.color = "#1f6fb2";
        energy.x = omega;
        energy.y = report.energyCurve.s;
        writeSvgPlot(outputPrefix + "_energy.svg", "energy capture", {energy}, true, false);
    }

    std::cout << txt.str();
    std::cout << "wrote " << outputPrefix << "_frame_report.txt, _gram.csv, _response.csv, "
              << "_response.svg, _energy.svg\n";
    return 0;
}

int cmdEncode(const std::string& configPath, const std::string& inputPath,
              const std::string& outputPath, double thetaOverride) {
    BankConfig cfg = loadBankConfig(configPath);
    FilterBankSpec spec = bankFromConfig(cfg);
    if (thetaOverride > 0.0) spec.theta = thetaOverride;
    const Signal raw = readInputSignal(inputPath, cfg.sampleRateHz);
    const Signal z = zScore(raw);
    const ChannelDecomposition d = analyze(z, spec);
    const std::vector<SpikeTrain> trains = encode(d, spec);
    writeSpikeFile(outputPath, spec, z.samples.size(), trains);
    std::size_t total = 0;
    for (const auto& tr : trains) total += tr.events.size();
    std::cout << "encoded " << z.samples.size() << " samples into " << total << " events across "
              << trains.size() << " channels (theta=" << fmtNum(spec.theta) << ")\n";
    std::cout << "wrote " << outputPath << "\n";
    return 0;
}

int cmdDecode(const std::string& inputPath, const std::string& outputPath,
              const std::string& decodeModeName, const std::string& referencePath) {
    const SpikeFileData data = readSpikeFile(inputPath);
    const DecodeMode mode =
        decodeModeName == "identity" ? DecodeMode::IdentityWeights : DecodeMode::LeastSquares;
    ReconstructionReport rep;
    if (mode == DecodeMode::LeastSquares) {
        if (referencePath.empty())
            throw Error(errcode::kConfig,
                        "decode: least-squares mode needs --reference for the channel targets");
        const Signal raw = readInputSignal(referencePath, 1.0 / data.spec.dt);
        const Signal z = zScore(raw);
        if (z.samples.size() != data.sampleCount)
            throw Error(errcode::kConfig, "decode: reference length " +
                                              std::to_string(z.samples.size()) +
                                              " does not match encoded sample count " +
                                              std::to_string(data.sampleCount));
        const ChannelDecomposition d = analyze(z, data.spec);
        rep = decode(data.trains, data.spec, data.sampleCount, mode, &d, &z);
        std::cout << "nRMSE vs reference: " << fmtNum(rep.nRMSE) << "\n";
    } else {
        rep = decode(data.trains, data.spec, data.sampleCount, mode);
        if (!referencePath.empty()) {
            const Signal raw = readInputSignal(referencePath, 1.0 / data.spec.dt);
            const Signal z = zScore(raw);
            if (z.samples.size() == rep.reconstructed.samples.size())
                std::cout << "nRMSE vs reference: "
                          << fmtNum(nrmse(z.samples, rep.reconstructed.samples)) << "\n";
        }
    }
    writeOutputSignal(outputPath, rep.reconstructed);
    std::cout << "wrote " << outputPath << "\n";
    return 0;
}

struct EvalFlags {
    std::string configPath;
    std::string inputPath;
    std::string outputPath;
    std::string mode = "spiking";
    std::string decodeMode;
    std::string corpus = "ecgBurst";
    std::string waveletOverride;
    double theta = 0.0;
    double seconds = 1.0;
    std::uint64_t seed = 1;
    std::size_t windows = 20;
};

ExperimentConfig experimentFromFlags(const EvalFlags& f) {
    const BankConfig cfg = loadBankConfig(f.configPath);
    ExperimentConfig ex;
    ex.wavelet = f.waveletOverride.empty() ? familyToKind(cfg.family)
                                           : parseWaveletKind(f.waveletOverride);
    ex.c = cfg.c;
    ex.K = cfg.K;
    ex.cascadeOrder = cfg.cascadeOrder;
    ex.theta = f.theta > 0.0 ? f.theta : cfg.theta;
    ex.sampleRateHz = cfg.sampleRateHz;
    ex.windowSeconds = f.seconds;
    ex.mode = f.mode == "exact" ? RunMode::Exact : RunMode::Spiking;
    ex.decodeMode = f.decodeMode.empty()
                        ? cfg.decodeMode
                        : (f.decodeMode == "identity" ? DecodeMode::IdentityWeights
                                                      : DecodeMode::LeastSquares);
    ex.reset = cfg.reset;
    ex.doeMu = cfg.doeMu;
    ex.corpus = parseCorpus(f.corpus);
    ex.seed = f.seed;
    ex.windows = f.windows;
    if (!f.inputPath.empty()) {
        const Signal raw = readInputSignal(f.inputPath, cfg.sampleRateHz);
        ex.inputs = sliceWindows(raw, f.seconds);
    }
    return ex;
}

int cmdEval(const EvalFlags& f) {
    const ExperimentConfig ex = experimentFromFlags(f);
    ResultTable table;
    table.rows.push_back(runExperiment(ex));
    std::cout << formatResultTable(table);
    if (!f.outputPath.empty()) {
        writeResultTableCsv(f.outputPath, table);
        std::cout << "wrote " << f.outputPath << "\n";
    }
    return 0;
}

int cmdSweep(const EvalFlags& f, const std::string& thetasCsv) {
    ExperimentConfig ex = experimentFromFlags(f);
    ex.mode = RunMode::Spiking;
    std::vector<double> thetas;
    std::stringstream ss(thetasCsv);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        if (tok.empty()) continue;
        try {
            thetas.push_back(std::stod(tok));
        } catch (const std::exception&) {
            throw Error(errcode::kConfig, "sweep: bad threshold value '" + tok + "'");
        }
    }
    const SweepResult sweep = thresholdSweep(ex, thetas);
    std::cout << "theta        meanNRMSE    spikes/s\n";
    for (const auto& p : sweep.points) {
        char line[120];
        std::snprintf(line, sizeof(line), "%-12.6g %-12.6f %-12.2f\n", p.theta, p.meanNRMSE,
                      p.meanSpikesPerSecond);
        std::cout << line;
    }
    std::cout << "affine fit: nRMSE = " << fmtNum(sweep.slope) << " * theta + "
              << fmtNum(sweep.intercept) << "  (R^2 = " << fmtNum(sweep.r2) << ")\n";
    if (!f.outputPath.empty()) {
        writeSweepCsv(f.outputPath + ".csv", sweep);
        writeSweepSvg(f.outputPath + ".svg", sweep);
        std::cout << "wrote " << f.outputPath << ".csv and " << f.outputPath << ".svg\n";
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"spikelet: causal multi-scale spiking wavelet codec"};
    app.require_subcommand(1);
    app.failure_message([](const CLI::App*, const CLI::Error& e) {
        return std::string("error: E_CONFIG: ") + e.what() + "\n";
    });

    std::string configPath, inputPath, outputPath, referencePath;
    std::string decodeModeName = "lstsq";
    double thetaOverride = 0.0;
    std::string outputPrefix = "analysis";

    CLI::App* analyze = app.add_subcommand("analyze", "frame diagnostics for a bank config");
    analyze->add_option("--config", configPath, "bank config JSON")->required();
    analyze->add_option("--output", outputPrefix, "output file prefix");

    CLI::App* encode = app.add_subcommand("encode", "encode a signal file into a spike file");
    encode->add_option("--config", configPath, "bank config JSON")->required();
    encode->add_option("--input", inputPath, "input signal (.csv or .wav)")->required();
    encode->add_option("--output", outputPath, "output spike file")->required();
    encode->add_option("--theta", thetaOverride, "spike threshold override");

    CLI::App* decode = app.add_subcommand("decode", "reconstruct a signal from a spike file");
    decode->add_option("--input", inputPath, "input spike file")->required();
    decode->add_option("--output", outputPath, "output signal (.csv or .wav)")->required();
    decode->add_option("--decode-mode", decodeModeName, "lstsq|identity")
        ->check(CLI::IsMember({"lstsq", "identity"}));
    decode->add_option("--reference", referencePath, "reference signal (required for lstsq)");

    EvalFlags evalFlags;
    CLI::App* eval = app.add_subcommand("eval", "run a reconstruction experiment");
    eval->add_option("--config", evalFlags.configPath, "bank config JSON")->required();
    eval->add_option("--input", evalFlags.inputPath, "signal file instead of a synthetic corpus");
    eval->add_option("--output", evalFlags.outputPath, "result table CSV");
    eval->add_option("--mode", evalFlags.mode, "exact|spiking")
        ->check(CLI::IsMember({"exact", "spiking"}));
    eval->add_option("--decode-mode", evalFlags.decodeMode, "lstsq|identity")
        ->check(CLI::IsMember({"lstsq", "identity"}));
    eval->add_option("--corpus", evalFlags.corpus,
                     "ecgBurst|chirp|boxcar|bandlimitedNoise");
    eval->add_option("--wavelet", evalFlags.waveletOverride,
                     "dog|doe|dot|haar|morlet|szu (defaults to the config family)");
    eval->add_option("--theta", evalFlags.theta, "spike threshold override");
    eval->add_option("--seconds", evalFlags.seconds, "window length in seconds");
    eval->add_option("--windows", evalFlags.windows, "number of corpus windows");
    eval->add_option("--seed", evalFlags.seed, "corpus seed");

    EvalFlags sweepFlags;
    std::string thetasCsv = "0.025,0.05,0.1,0.2,0.4";
    CLI::App* sweep = app.add_subcommand("sweep", "threshold sweep with affine fit");
    sweep->add_option("--config", sweepFlags.configPath, "bank config JSON")->required();
    sweep->add_option("--input", sweepFlags.inputPath, "signal file instead of a corpus");
    sweep->add_option("--output", sweepFlags.outputPath, "output prefix for CSV/SVG");
    sweep->add_option("--decode-mode", sweepFlags.decodeMode, "lstsq|identity")
        ->check(CLI::IsMember({"lstsq", "identity"}));
    sweep->add_option("--corpus", sweepFlags.corpus, "ecgBurst|chirp|boxcar|bandlimitedNoise");
    sweep->add_option("--wavelet", sweepFlags.waveletOverride, "dog|doe|dot");
    sweep->add_option("--thetas", thetasCsv, "comma-separated thresholds");
    sweep->add_option("--seconds", sweepFlags.seconds, "window length in seconds");
    sweep->add_option("--windows", sweepFlags.windows, "number of corpus windows");
    sweep->add_option("--seed", sweepFlags.seed, "corpus seed");

    CLI11_PARSE(app, argc, argv);

    try {
        if (analyze->parsed()) return cmdAnalyze(configPath, outputPrefix);
        if (encode->parsed()) return cmdEncode(configPath, inputPath, outputPath, thetaOverride);
        if (decode->parsed())
            return cmdDecode(inputPath, outputPath, decodeModeName, referencePath);
        if (eval->parsed()) return cmdEval(evalFlags);
        if (sweep->parsed()) return cmdSweep(sweepFlags, thetasCsv);
    } catch (const Error& e) {
        std::cerr << "error: " << e.code() << ": " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: E_UNKNOWN: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
