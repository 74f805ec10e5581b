#include "spikelet/frames.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <string>

#include "spikelet/errors.hpp"

namespace spikelet {

namespace {

void checkOmegaGrid(const std::vector<double>& omega) {
    for (double w : omega)
        if (!(w >= 0.0) || !std::isfinite(w))
            throw Error(errcode::kRange, "frames: omega grid must be finite and nonnegative");
}

// S(omega) for the DoT family with every level's cascade drawn from one shared
// geometric stage ladder, truncated at a common smallest time constant muStop.
// With nested stage sets the channel energies telescope exactly, which is what
// `sTelescoped` exploits.
void dotEnergy(const FilterBankSpec& spec, const std::vector<double>& omega, EnergyCurve& out) {
    const double c = spec.grid.c;
    const double sigmaK = spec.grid.levels.back();
    const std::size_t K = spec.grid.K;
    double omegaMax = 0.0;
    for (double w : omega) omegaMax = std::max(omegaMax, w);
    const double muStop = omegaMax > 0.0 ? 1e-4 / omegaMax : std::numeric_limits<double>::infinity();
    const double root = std::sqrt(c * c - 1.0) * sigmaK;
    std::vector<double> ladder;  // ladder[m-1] = sqrt(c^2-1) sigma_K c^{-m}
    for (std::size_t m = 1;; ++m) {
        const double mu = root * std::pow(c, -static_cast<double>(m));
        if (mu < muStop) break;
        ladder.push_back(mu);
        if (ladder.size() > 100000)
            throw Error(errcode::kGuard, "frames: stage ladder too deep");
    }
    out.s.resize(omega.size());
    out.sTelescoped.resize(omega.size());
    for (std::size_t i = 0; i < omega.size(); ++i) {
        const double w = omega[i];
        // finest level (index 0 of the grid extended downward) starts K+1 deep
        std::complex<double> finest(1.0, 0.0);
        for (std::size_t m = K + 1; m <= ladder.size(); ++m)
            finest /= std::complex<double>(1.0, ladder[m - 1] * w);
        double direct = std::norm(finest);
        std::complex<double> prev = finest;
        for (std::size_t k = 1; k <= K; ++k) {
            std::complex<double> cur = prev;
            const std::size_t m = K - k + 1;  // largest stage unique to level k
            if (m <= ladder.size()) cur /= std::complex<double>(1.0, ladder[m - 1] * w);
            direct += std::norm(cur - prev);
            prev = cur;
        }
        out.s[i] = direct;
        out.sTelescoped[i] = 2.0 * std::norm(finest) - std::norm(prev);
    }
}

} // namespace

EnergyCurve energyCapture(const FilterBankSpec& spec, const std::vector<double>& omegaGrid) {
    checkOmegaGrid(omegaGrid);
    EnergyCurve out;
    out.omega = omegaGrid;
    if (spec.family == WaveletFamily::DoT) {
        dotEnergy(spec, omegaGrid, out);
        return out;
    }
    out.s.resize(omegaGrid.size());
    const std::vector<std::complex<double>> lp = lowpassResponse(spec, omegaGrid);
    for (std::size_t i = 0; i < omegaGrid.size(); ++i) out.s[i] = std::norm(lp[i]);
    for (std::size_t k = 1; k <= spec.grid.K; ++k) {
        const std::vector<std::complex<double>> ch = frequencyResponse(spec, k, omegaGrid);
        for (std::size_t i = 0; i < omegaGrid.size(); ++i) out.s[i] += std::norm(ch[i]);
    }
    return out;
}

std::pair<double, double> defaultOmegaRange(const FilterBankSpec& spec) {
    const double lo = 0.01 * peakFrequency(spec, spec.grid.K);
    const double hi = 100.0 * spec.grid.c / spec.grid.levels[1];
    return {lo, hi};
}

FrameBoundsResult frameBounds(const FilterBankSpec& spec, double omegaLo, double omegaHi,
                              std::size_t gridSize) {
    if (!(omegaLo > 0.0) || !(omegaHi > omegaLo))
        throw Error(errcode::kRange, "frames: need 0 < omegaLo < omegaHi");
    if (gridSize < 2) throw Error(errcode::kRange, "frames: grid needs at least two points");
    std::vector<double> omega(gridSize + 1);
    omega[0] = 0.0;
    const double logLo = std::log(omegaLo);
    const double step = (std::log(omegaHi) - logLo) / static_cast<double>(gridSize - 1);
    for (std::size_t i = 0; i < gridSize; ++i)
        omega[i + 1] = std::exp(logLo + step * static_cast<double>(i));
    const EnergyCurve curve = energyCapture(spec, omega);
    FrameBoundsResult r;
    r.B = curve.s[0];
    r.A = curve.s[1];
    for (std::size_t i = 1; i < curve.s.size(); ++i) {
        r.A = std::min(r.A, curve.s[i]);
        r.B = std::max(r.B, curve.s[i]);
    }
    return r;
}

FrameBoundsResult frameBounds(const FilterBankSpec& spec) {
    const auto range = defaultOmegaRange(spec);
    return frameBounds(spec, range.first, range.second);
}

Eigen::MatrixXd gramMatrix(const FilterBankSpec& spec) {
    const std::size_t K = spec.grid.K;
    FilterBankSpec ref = spec;
    ref.dt = 1e-3 * spec.grid.levels[1];
    ref.channelNorms.assign(K, 1.0);
    std::vector<SampledKernel> psi;
    psi.reserve(K);
    std::size_t total = 0;
    for (std::size_t k = 1; k <= K; ++k) {
        psi.push_back(waveletImpulse(ref, k));
        total += psi.back().samples.size();
        if (total > (std::size_t{1} << 26))
            throw Error(errcode::kGuard, "frames: gram reference grid too large");
    }
    Eigen::MatrixXd g(static_cast<Eigen::Index>(K), static_cast<Eigen::Index>(K));
    for (std::size_t j = 0; j < K; ++j) {
        for (std::size_t k = j; k < K; ++k) {
            const auto& a = psi[j];
            const auto& b = psi[k];
            const std::ptrdiff_t lo = std::max(-a.origin, -b.origin);
            const std::ptrdiff_t hiA = static_cast<std::ptrdiff_t>(a.samples.size()) - a.origin;
            const std::ptrdiff_t hiB = static_cast<std::ptrdiff_t>(b.samples.size()) - b.origin;
            const std::ptrdiff_t hi = std::min(hiA, hiB);
            double s = 0.0;
            for (std::ptrdiff_t t = lo; t < hi; ++t)
                s += a.samples[static_cast<std::size_t>(t + a.origin)] *
                     b.samples[static_cast<std::size_t>(t + b.origin)];
            g(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(k)) = s;
            g(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(j)) = s;
        }
    }
    for (std::size_t k = 0; k < K; ++k)
        if (!(g(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(k)) > 0.0))
            throw Error(errcode::kNumeric,
                        "frames: degenerate channel " + std::to_string(k + 1) + " in gram");
    Eigen::VectorXd d = g.diagonal().array().sqrt().matrix();
    for (Eigen::Index j = 0; j < g.rows(); ++j)
        for (Eigen::Index k = 0; k < g.cols(); ++k) g(j, k) /= d(j) * d(k);
    return g;
}

FrameReport frameReport(const FilterBankSpec& spec) {
    FrameReport rep;
    const auto range = defaultOmegaRange(spec);
    rep.omegaLo = range.first;
    rep.omegaHi = range.second;
    const std::size_t gridSize = 8192;
    std::vector<double> omega(gridSize + 1);
    omega[0] = 0.0;
    const double logLo = std::log(rep.omegaLo);
    const double step = (std::log(rep.omegaHi) - logLo) / static_cast<double>(gridSize - 1);
    for (std::size_t i = 0; i < gridSize; ++i)
        omega[i + 1] = std::exp(logLo + step * static_cast<double>(i));
    rep.energyCurve = energyCapture(spec, omega);
    rep.B = rep.energyCurve.s[0];
    rep.A = rep.energyCurve.s[1];
    for (std::size_t i = 1; i < rep.energyCurve.s.size(); ++i) {
        rep.A = std::min(rep.A, rep.energyCurve.s[i]);
        rep.B = std::max(rep.B, rep.energyCurve.s[i]);
    }
    rep.gram = gramMatrix(spec);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(rep.gram);
    const double lamMin = es.eigenvalues().minCoeff();
    const double lamMax = es.eigenvalues().maxCoeff();
    rep.gramMinEigenvalue = lamMin;
    rep.conditionNumber = lamMax / lamMin;
    return rep;
}

double designRatio(double omegaMin, double omegaMax, std::size_t K) {
    if (!(omegaMin > 0.0) || !(omegaMax > omegaMin))
        throw Error(errcode::kRange, "frames: need 0 < omegaMin < omegaMax");
    if (K < 2) throw Error(errcode::kRange, "frames: design needs K >= 2");
    const double c = std::pow(omegaMax / omegaMin, 1.0 / static_cast<double>(K - 1));
    if (c < kMinScaleRatio) {
        const auto kMax = static_cast<std::size_t>(
            1.0 + std::floor(std::log(omegaMax / omegaMin) / std::log(kMinScaleRatio)));
        throw Error(errcode::kFloor, "frames: ratio " + std::to_string(c) + " below floor " +
                                         std::to_string(kMinScaleRatio) + "; largest usable K is " +
                                         std::to_string(kMax));
    }
    return c;
}

} // namespace spikelet
