#pragma once

#include <cstddef>
#include <vector>

#include "spikelet/signal.hpp"

namespace spikelet {

// Discrete leaky integrators become useless when the per-sample decay factor
// alpha = exp(-dt/mu) drops below this floor; mu must satisfy mu >= dt / -ln(alphaFloor).
inline constexpr double kAlphaFloor = 0.01;

// Geometric scale ratios below this make adjacent channels numerically indistinct.
inline constexpr double kMinScaleRatio = 1.05;

// Smallest stable time constant for a leaky integrator at sample spacing dt.
double minTimeConstant(double dt);

// Geometric grid of scale levels. levels[k] = level1 * c^(k-1) for k = 1..K and
// levels[0] = level1 / c, so the finest bandpass pair is (level1, level0).
// For the Gaussian and limit-kernel families the levels are sigmas; for the
// exponential family they are time constants mu.
struct ScaleGrid {
    std::vector<double> levels;  // size K+1, strictly increasing
    double c = 0.0;              // ratio between adjacent levels
    std::size_t K = 0;           // number of bandpass channels

    double finest() const { return levels.front(); }
    double coarsest() const { return levels.back(); }
};

// Builds the grid; throws E_RANGE/E_FLOOR on invalid level1/c/K.
ScaleGrid makeScaleGrid(double level1, double c, std::size_t K);

// Per-stage time constants of the time-causal limit kernel at scale sigma:
// mu_j = c^(-j) * sqrt(c^2-1) * sigma, j = 1..n. Their squares sum to
// sigma^2 * (1 - c^(-2n)).
std::vector<double> limitKernelTimeConstants(double sigma, double c, std::size_t n);

// Largest cascade order whose finest stage still clears the stability floor at
// sample spacing dt (0 if even the first stage is unstable).
std::size_t maxStableCascadeOrder(double sigma, double c, double dt);

// Zero-phase smoothing with a sampled Gaussian, truncated at +-6 sigma and
// renormalized to unit sum; boundaries use symmetric reflection. sigma = 0 is
// the identity.
Signal smoothGaussian(const Signal& in, double sigma);

// Causal first-order smoothing y[t] = alpha*y[t-1] + (1-alpha)*x[t] with
// alpha = exp(-dt/mu) and zero initial state; exact unit DC gain.
// Throws E_FLOOR if mu is below the stability floor.
Signal smoothExponential(const Signal& in, double mu);

// Cascade of n exponential stages realizing the time-causal limit kernel at
// scale sigma. Throws E_FLOOR (with the failing stage index) if any requested
// stage is unstable; use maxStableCascadeOrder to pick n.
Signal smoothLimitKernel(const Signal& in, double sigma, double c, std::size_t n);

} // namespace spikelet
