#pragma once

#include <cstddef>
#include <vector>

namespace spikelet {

// Uniformly sampled real signal. dt is the sample spacing in seconds.
struct Signal {
    std::vector<double> samples;
    double dt = 1.0;

    std::size_t size() const noexcept { return samples.size(); }
    double duration() const noexcept { return static_cast<double>(samples.size()) * dt; }
};

double mean(const std::vector<double>& x);

// Population standard deviation (1/n).
double stddev(const std::vector<double>& x);

// Root-mean-square error between two equal-length sample vectors.
double rmse(const std::vector<double>& a, const std::vector<double>& b);

// RMSE normalized by the reference's population standard deviation.
// Convention: if the reference is constant (sigma = 0), returns 0 when the error
// is exactly zero and +inf otherwise.
double nrmse(const std::vector<double>& reference, const std::vector<double>& estimate);

} // namespace spikelet
