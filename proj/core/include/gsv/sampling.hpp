#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "gsv/grid.hpp"
#include "gsv/kernels.hpp"

namespace gsv {

/// One joint draw of (B, W, Bhat) on the grid.
struct GaussianSample {
    std::vector<double> b_increments;  // n values of dB
    std::vector<double> w_increments;  // n values of dW, independent of B
    std::vector<double> vol_path;      // n+1 values of Bhat at nodes, vol_path[0] = 0
};

enum class SamplingBackend {
    kernel,      // Bhat is a linear image of the B increments (joint law with B)
    covariance,  // Bhat from a Cholesky factor, independent of B
};

/// Precomputed sampler; draws are a pure function of (seed, index).
///
/// Kernel backend: vol_path = W * (dB / dt) with W the hatf weights, so
/// hatf applied to the step function dB/dt reproduces vol_path exactly.
class GaussianSampler {
public:
    GaussianSampler(const KernelSpec& spec, const PathGrid& grid, SamplingBackend backend = SamplingBackend::kernel);

    const PathGrid& grid() const noexcept { return grid_; }
    SamplingBackend backend() const noexcept { return backend_; }
    /// Jitter used by the covariance backend's factorization.
    double jitter() const noexcept { return jitter_; }

    void draw(std::uint64_t seed, std::uint64_t index, GaussianSample& out) const;
    GaussianSample draw(std::uint64_t seed, std::uint64_t index) const;

private:
    PathGrid grid_;
    SamplingBackend backend_;
    Eigen::MatrixXd map_;  // (n+1) x n hatf weights, or n x n Cholesky factor
    double jitter_ = 0.0;
};

std::vector<GaussianSample> sample_gaussian_paths(const KernelSpec& spec, const PathGrid& grid, std::size_t count,
                                                  std::uint64_t seed,
                                                  SamplingBackend backend = SamplingBackend::kernel);

}  // namespace gsv
