#pragma once

#include <complex>
#include <cstddef>
#include <vector>

#include "spikelet/decoder.hpp"
#include "spikelet/kernels.hpp"
#include "spikelet/signal.hpp"

namespace spikelet {

struct HaarTransform {
    std::vector<double> coefficients;  // final approximation block, then details
    Signal reconstructed;
    std::size_t levels = 0;
};

// Orthonormal Haar DWT round trip; input is zero-padded to a multiple of
// 2^levels and the reconstruction is clipped back to the input length.
HaarTransform haarRoundTrip(const Signal& s, std::size_t levels);

enum class CwtFamily { Morlet, Szu };

struct DenseCwtBank {
    CwtFamily family = CwtFamily::Morlet;
    ScaleGrid grid;
    double dt = 0.0;
    std::vector<std::vector<std::complex<double>>> kernels;  // unit L2 norm
    std::vector<std::ptrdiff_t> origins;
};

// Channel dilations align each kernel's center frequency with the geometric
// grid's passband centers (sqrt(c)/level); Szu kernels are causal.
DenseCwtBank makeCwtBank(CwtFamily family, const ScaleGrid& grid, double dt);

// Dense per-sample coefficients c_k[t] = <x, psi_k(.-t)> for shifts inside
// the window, reconstructed by a ridge least-squares fit of the signal
// against the continuous-time synthesis model (kernels integrated over the
// sample cells rather than read at the grid instants). The mismatch between
// the two discretizations is the sampling error of the transform: second
// order for smooth two-sided kernels, first order at the onset jump of
// one-sided kernels, so causal banks pay a reconstruction penalty.
// spikeCounts reports dense coefficient counts per channel.
ReconstructionReport cwtEncodeDecode(const Signal& s, const DenseCwtBank& bank);

} // namespace spikelet
