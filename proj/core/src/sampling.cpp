#include "gsv/sampling.hpp"

#include <cmath>

#include "gsv/error.hpp"
#include "gsv/parallel.hpp"
#include "gsv/random.hpp"

namespace gsv {

GaussianSampler::GaussianSampler(const KernelSpec& spec, const PathGrid& grid, SamplingBackend backend)
    : grid_(grid), backend_(backend) {
    spec.validate();
    if (backend == SamplingBackend::kernel) {
        map_ = HatfOperator(spec, grid).weights();
    } else {
        auto chol = cholesky_with_jitter(covariance_matrix(spec, grid));
        map_ = std::move(chol.lower);
        jitter_ = chol.jitter;
    }
}

void GaussianSampler::draw(std::uint64_t seed, std::uint64_t index, GaussianSample& out) const {
    const std::size_t n = grid_.steps();
    const double sqdt = std::sqrt(grid_.dt());
    RandomStream rng(seed, index);
    out.b_increments.resize(n);
    out.w_increments.resize(n);
    out.vol_path.assign(n + 1, 0.0);
    for (auto& v : out.b_increments) v = sqdt * rng.normal();
    for (auto& v : out.w_increments) v = sqdt * rng.normal();

    if (backend_ == SamplingBackend::kernel) {
        const double inv_dt = 1.0 / grid_.dt();
        for (std::size_t i = 1; i <= n; ++i) {
            double acc = 0.0;
            for (std::size_t j = 0; j < i; ++j) acc += map_(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) * out.b_increments[j];
            out.vol_path[i] = acc * inv_dt;
        }
    } else {
        std::vector<double> z(n);
        for (auto& v : z) v = rng.normal();
        for (std::size_t i = 0; i < n; ++i) {
            double acc = 0.0;
            for (std::size_t j = 0; j <= i; ++j) acc += map_(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) * z[j];
            out.vol_path[i + 1] = acc;
        }
    }
}

GaussianSample GaussianSampler::draw(std::uint64_t seed, std::uint64_t index) const {
    GaussianSample s;
    draw(seed, index, s);
    return s;
}

std::vector<GaussianSample> sample_gaussian_paths(const KernelSpec& spec, const PathGrid& grid, std::size_t count,
                                                  std::uint64_t seed, SamplingBackend backend) {
    require(count >= 1, "sample count must be positive");
    const GaussianSampler sampler(spec, grid, backend);
    std::vector<GaussianSample> out(count);
    parallel_for(count, [&](std::size_t begin, std::size_t end) {
        for (std::size_t k = begin; k < end; ++k) sampler.draw(seed, k, out[k]);
    });
    return out;
}

}  // namespace gsv
