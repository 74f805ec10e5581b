#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "spikelet/wavelets.hpp"

namespace spikelet {

// Sampled energy-capture curve S(omega) = |residual|^2 + sum_k |psi_k|^2 of the
// unnormalized channel transfer functions. For DoG and DoE the residual term is
// the coarsest smoothing kernel. For DoT the residual term is the finest-scale
// kernel, and `sTelescoped` carries the closed telescoped equivalent
// 2|finest|^2 - |coarsest|^2 as an independent cross-check (empty otherwise).
// DoT products share one geometric stage ladder truncated at a common smallest
// time constant 1e-4 / max(omega), so the two forms differ only by rounding.
struct EnergyCurve {
    std::vector<double> omega;
    std::vector<double> s;
    std::vector<double> sTelescoped;
};

EnergyCurve energyCapture(const FilterBankSpec& spec, const std::vector<double>& omegaGrid);

struct FrameBoundsResult {
    double A = 0.0;
    double B = 0.0;
};

// Infimum / supremum of S over `gridSize` log-spaced frequencies in
// [omegaLo, omegaHi]; the supremum additionally samples omega = 0, where S = 1
// exactly for every family.
FrameBoundsResult frameBounds(const FilterBankSpec& spec, double omegaLo, double omegaHi,
                              std::size_t gridSize = 8192);

// Default evaluation range tied to the bank: [0.01 * peak(K), 100 * c / level_1].
std::pair<double, double> defaultOmegaRange(const FilterBankSpec& spec);

FrameBoundsResult frameBounds(const FilterBankSpec& spec);

// Normalized Gram matrix of the channel impulse responses: inner products on a
// reference grid with dt = 1e-3 * level_1, scaled to a unit diagonal.
Eigen::MatrixXd gramMatrix(const FilterBankSpec& spec);

struct FrameReport {
    double A = 0.0;
    double B = 0.0;
    double omegaLo = 0.0;
    double omegaHi = 0.0;
    EnergyCurve energyCurve;
    Eigen::MatrixXd gram;
    double conditionNumber = 0.0;
    double gramMinEigenvalue = 0.0;
};

FrameReport frameReport(const FilterBankSpec& spec);

// Scale ratio that spans [omegaMin, omegaMax] (Hz or any common unit) with K
// channels: c = (omegaMax/omegaMin)^{1/(K-1)}. Throws if the result would fall
// below the admissible floor, reporting the largest usable K.
double designRatio(double omegaMin, double omegaMax, std::size_t K);

} // namespace spikelet
