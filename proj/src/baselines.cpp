#include "spikelet/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include <Eigen/Dense>

#include "spikelet/errors.hpp"
#include "spikelet/threading.hpp"

namespace spikelet {

namespace {

constexpr double kMorletOmega0 = 6.0;
constexpr double kSzuOmega = 5.0;
constexpr std::size_t kCwtMaxSamples = 4096;
constexpr std::size_t kCwtMaxChannels = 16;
// ridge for the windowed dense solve, relative to the largest diagonal entry
// of the normal matrix; keeps the fit from amplifying the sampling gap
// between the grid kernels and the continuous-time synthesis model
constexpr double kCwtRidge = 1e-2;

std::complex<double> morletValue(double tau) {
    const double corr = std::exp(-0.5 * kMorletOmega0 * kMorletOmega0);
    const double amp = std::pow(M_PI, -0.25);
    return amp * std::exp(-0.5 * tau * tau) *
           std::complex<double>(std::cos(kMorletOmega0 * tau) - corr, std::sin(kMorletOmega0 * tau));
}

std::complex<double> szuValue(double tau) {
    if (tau < 0.0) return {0.0, 0.0};
    return std::exp(-0.5 * tau) *
           std::complex<double>(std::cos(kSzuOmega * tau), std::sin(kSzuOmega * tau));
}

double cwtScale(CwtFamily family, const ScaleGrid& grid, std::size_t k) {
    const double centerOmega = family == CwtFamily::Morlet ? kMorletOmega0 : kSzuOmega;
    const double target = std::sqrt(grid.c) / grid.levels[k];
    return centerOmega / target;
}

// kernel samples on the signal grid. Point sampling reads the formula at the
// grid instants; cell averaging integrates it over one sample spacing around
// each instant, which is how the continuous kernel acts on sampled data.
std::vector<std::complex<double>> sampleCwtKernel(CwtFamily family, double scale, double dt,
                                                  std::ptrdiff_t& origin, bool cellAverage) {
    std::vector<std::complex<double>> kernel;
    std::ptrdiff_t first = 0;
    if (family == CwtFamily::Morlet) {
        const auto r = static_cast<std::ptrdiff_t>(std::ceil(6.0 * scale / dt));
        origin = r;
        first = -r;
        kernel.resize(static_cast<std::size_t>(2 * r + 1));
    } else {
        origin = 0;
        kernel.resize(static_cast<std::size_t>(std::ceil(28.0 * scale / dt)) + 1);
    }
    const double h = dt / scale;
    for (std::size_t i = 0; i < kernel.size(); ++i) {
        const double tau = static_cast<double>(first + static_cast<std::ptrdiff_t>(i)) * h;
        std::complex<double> v;
        if (cellAverage) {
            constexpr int kCells = 32;
            std::complex<double> acc(0.0, 0.0);
            for (int j = 0; j < kCells; ++j) {
                const double u = tau - 0.5 * h + (j + 0.5) * h / kCells;
                acc += family == CwtFamily::Morlet ? morletValue(u) : szuValue(u);
            }
            v = acc / static_cast<double>(kCells);
        } else {
            v = family == CwtFamily::Morlet ? morletValue(tau) : szuValue(tau);
        }
        kernel[i] = v;
    }
    return kernel;
}

} // namespace

HaarTransform haarRoundTrip(const Signal& s, std::size_t levels) {
    if (levels == 0) throw Error(errcode::kRange, "haar: need at least one level");
    if (s.samples.empty()) throw Error(errcode::kRange, "haar: empty signal");
    std::size_t block = std::size_t{1} << levels;
    std::size_t padded = ((s.samples.size() + block - 1) / block) * block;
    std::vector<double> work(s.samples.begin(), s.samples.end());
    work.resize(padded, 0.0);
    const double invRoot2 = 1.0 / std::sqrt(2.0);
    HaarTransform out;
    out.levels = levels;
    std::size_t n = padded;
    std::vector<std::vector<double>> details;
    for (std::size_t lvl = 0; lvl < levels; ++lvl) {
        std::vector<double> approx(n / 2), detail(n / 2);
        for (std::size_t i = 0; i < n / 2; ++i) {
            approx[i] = (work[2 * i] + work[2 * i + 1]) * invRoot2;
            detail[i] = (work[2 * i] - work[2 * i + 1]) * invRoot2;
        }
        std::copy(approx.begin(), approx.end(), work.begin());
        details.push_back(std::move(detail));
        n /= 2;
    }
    out.coefficients.assign(work.begin(), work.begin() + static_cast<std::ptrdiff_t>(n));
    for (auto it = details.rbegin(); it != details.rend(); ++it)
        out.coefficients.insert(out.coefficients.end(), it->begin(), it->end());
    // inverse from the coefficient vector alone
    std::vector<double> rec(out.coefficients.begin(),
                            out.coefficients.begin() + static_cast<std::ptrdiff_t>(n));
    std::size_t offset = n;
    for (std::size_t lvl = levels; lvl-- > 0;) {
        const std::size_t half = rec.size();
        std::vector<double> up(2 * half);
        for (std::size_t i = 0; i < half; ++i) {
            const double d = out.coefficients[offset + i];
            up[2 * i] = (rec[i] + d) * invRoot2;
            up[2 * i + 1] = (rec[i] - d) * invRoot2;
        }
        offset += half;
        rec = std::move(up);
    }
    out.reconstructed.dt = s.dt;
    out.reconstructed.samples.assign(rec.begin(),
                                     rec.begin() + static_cast<std::ptrdiff_t>(s.samples.size()));
    return out;
}

DenseCwtBank makeCwtBank(CwtFamily family, const ScaleGrid& grid, double dt) {
    if (!(dt > 0.0)) throw Error(errcode::kRange, "cwt: dt must be positive");
    DenseCwtBank bank;
    bank.family = family;
    bank.grid = grid;
    bank.dt = dt;
    for (std::size_t k = 1; k <= grid.K; ++k) {
        const double scale = cwtScale(family, grid, k);
        std::ptrdiff_t origin = 0;
        std::vector<std::complex<double>> kernel = sampleCwtKernel(family, scale, dt, origin, false);
        double energy = 0.0;
        for (const auto& v : kernel) energy += std::norm(v);
        if (!(energy > 0.0)) throw Error(errcode::kNumeric, "cwt: degenerate kernel");
        const double inv = 1.0 / std::sqrt(energy);
        for (auto& v : kernel) v *= inv;
        bank.kernels.push_back(std::move(kernel));
        bank.origins.push_back(origin);
    }
    return bank;
}

ReconstructionReport cwtEncodeDecode(const Signal& s, const DenseCwtBank& bank) {
    const std::size_t T = s.samples.size();
    if (T == 0) throw Error(errcode::kRange, "cwt: empty signal");
    if (T > kCwtMaxSamples)
        throw Error(errcode::kGuard, "cwt: dense solve limited to " +
                                         std::to_string(kCwtMaxSamples) + " samples, got " +
                                         std::to_string(T));
    if (bank.grid.K > kCwtMaxChannels)
        throw Error(errcode::kGuard, "cwt: dense solve limited to " +
                                         std::to_string(kCwtMaxChannels) + " channels");
    const std::size_t K = bank.grid.K;
    const auto n = static_cast<Eigen::Index>(T);
    ReconstructionReport rep;
    rep.spikeCounts.assign(K, T);
    // synthesis dictionary: the continuous kernels averaged over sample
    // cells, sharing the analysis normalization. The gap between these and
    // the grid samples is the digital-sampling error of the transform; it is
    // second order for the smooth two-sided kernels but first order at a
    // one-sided kernel's onset jump, so causal banks reconstruct worse.
    std::vector<std::vector<std::complex<double>>> syn(K);
    parallelFor(K, [&](std::size_t kc) {
        const double scale = cwtScale(bank.family, bank.grid, kc + 1);
        std::ptrdiff_t origin = 0;
        const auto point = sampleCwtKernel(bank.family, scale, bank.dt, origin, false);
        double energy = 0.0;
        for (const auto& v : point) energy += std::norm(v);
        const double inv = 1.0 / std::sqrt(energy);
        syn[kc] = sampleCwtKernel(bank.family, scale, bank.dt, origin, true);
        for (auto& v : syn[kc]) v *= inv;
        if (syn[kc].size() != bank.kernels[kc].size() || origin != bank.origins[kc])
            throw Error(errcode::kNumeric, "cwt: synthesis grid mismatch");
    });
    // dense coefficients, one per channel and in-window shift
    std::vector<std::vector<std::complex<double>>> coeffs(K);
    parallelFor(K, [&](std::size_t kc) {
        const auto& psi = bank.kernels[kc];
        const std::ptrdiff_t o = bank.origins[kc];
        const auto L = static_cast<std::ptrdiff_t>(psi.size());
        coeffs[kc].assign(T, {0.0, 0.0});
        for (std::ptrdiff_t t = 0; t < static_cast<std::ptrdiff_t>(T); ++t) {
            std::complex<double> acc(0.0, 0.0);
            const std::ptrdiff_t uLo = std::max<std::ptrdiff_t>(0, t - o);
            const std::ptrdiff_t uHi =
                std::min<std::ptrdiff_t>(static_cast<std::ptrdiff_t>(T), t - o + L);
            for (std::ptrdiff_t u = uLo; u < uHi; ++u)
                acc += s.samples[static_cast<std::size_t>(u)] *
                       std::conj(psi[static_cast<std::size_t>(u - t + o)]);
            coeffs[kc][static_cast<std::size_t>(t)] = acc;
        }
    });
    // normal matrix of the real-split windowed synthesis dictionary, one
    // diagonal at a time from prefix sums of the lagged kernel product; the
    // shift truncation makes it non-Toeplitz near the window edges
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
    for (std::size_t kc = 0; kc < K; ++kc) {
        const auto& psi = syn[kc];
        const std::ptrdiff_t o = bank.origins[kc];
        const auto L = static_cast<std::ptrdiff_t>(psi.size());
        parallelFor(T, [&](std::size_t dIdx) {
            const auto d = static_cast<std::ptrdiff_t>(dIdx);  // lag u - v >= 0
            if (d >= L) return;
            std::vector<double> prefix(static_cast<std::size_t>(L));
            double run = 0.0;
            for (std::ptrdiff_t j = 0; j < L; ++j) {
                if (j >= d) {
                    const auto& a = psi[static_cast<std::size_t>(j)];
                    const auto& bb = psi[static_cast<std::size_t>(j - d)];
                    run += a.real() * bb.real() + a.imag() * bb.imag();
                }
                prefix[static_cast<std::size_t>(j)] = run;
            }
            for (std::ptrdiff_t u = d; u < static_cast<std::ptrdiff_t>(T); ++u) {
                // kernel indices j = u - t + o reached by shifts t in [0, T)
                const std::ptrdiff_t jLo =
                    std::max<std::ptrdiff_t>({d, u + o - static_cast<std::ptrdiff_t>(T) + 1, 0});
                const std::ptrdiff_t jHi = std::min<std::ptrdiff_t>(L - 1, u + o);
                if (jLo > jHi) continue;
                const double sum =
                    prefix[static_cast<std::size_t>(jHi)] -
                    (jLo > 0 ? prefix[static_cast<std::size_t>(jLo - 1)] : 0.0);
                m(static_cast<Eigen::Index>(u), static_cast<Eigen::Index>(u - d)) += sum;
            }
        });
    }
    double diagMax = 0.0;
    for (Eigen::Index u = 0; u < n; ++u) diagMax = std::max(diagMax, m(u, u));
    if (!(diagMax > 0.0)) throw Error(errcode::kNumeric, "cwt: empty dictionary coverage");
    const double lambda = kCwtRidge * diagMax;
    for (Eigen::Index u = 0; u < n; ++u) {
        m(u, u) += lambda;
        for (Eigen::Index v = u + 1; v < n; ++v) m(u, v) = m(v, u);
    }
    Eigen::VectorXd b = Eigen::VectorXd::Zero(n);
    for (std::size_t kc = 0; kc < K; ++kc) {
        const auto& psi = syn[kc];
        const std::ptrdiff_t o = bank.origins[kc];
        const auto L = static_cast<std::ptrdiff_t>(psi.size());
        for (std::size_t u = 0; u < T; ++u) {
            double acc = 0.0;
            const auto uu = static_cast<std::ptrdiff_t>(u);
            const std::ptrdiff_t tLo = std::max<std::ptrdiff_t>(0, uu + o - L + 1);
            const std::ptrdiff_t tHi =
                std::min<std::ptrdiff_t>(static_cast<std::ptrdiff_t>(T), uu + o + 1);
            for (std::ptrdiff_t t = tLo; t < tHi; ++t) {
                const auto& c = coeffs[kc][static_cast<std::size_t>(t)];
                const auto& p = psi[static_cast<std::size_t>(uu - t + o)];
                // adjoint of the real-split analysis: Re c pairs with Re psi,
                // Im c = -<x, Im psi> pairs with -Im psi
                acc += c.real() * p.real() - c.imag() * p.imag();
            }
            b(static_cast<Eigen::Index>(u)) += acc;
        }
    }
    Eigen::LDLT<Eigen::MatrixXd> ldlt(m);
    const Eigen::VectorXd y = ldlt.solve(b);
    rep.reconstructed.dt = s.dt;
    rep.reconstructed.samples.assign(y.data(), y.data() + y.size());
    rep.nRMSE = nrmse(s.samples, rep.reconstructed.samples);
    return rep;
}

} // namespace spikelet
