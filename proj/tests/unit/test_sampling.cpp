#include <cstdlib>

#include "doctest.h"
#include "gsv/random.hpp"
#include "gsv/sampling.hpp"
#include "oracles.hpp"

using namespace gsv;

namespace {

// Empirical covariance of (vol_path[i], vol_path[j]) with a delta-method standard error.
std::pair<double, double> empirical_cov(const std::vector<GaussianSample>& s, std::size_t i, std::size_t j) {
    std::vector<double> prod(s.size());
    for (std::size_t k = 0; k < s.size(); ++k) prod[k] = s[k].vol_path[i] * s[k].vol_path[j];
    const auto m = oracle::moments(prod);
    return {m.mean, m.se};
}

void check_law(const KernelSpec& spec, const PathGrid& grid, SamplingBackend backend, std::size_t count) {
    const auto samples = sample_gaussian_paths(spec, grid, count, 2024, backend);
    RandomStream pick(99, 0, RandomStream::Purpose::restart);
    const std::size_t n = grid.steps();
    for (int p = 0; p < 10; ++p) {
        const std::size_t i = 1 + static_cast<std::size_t>(pick.uniform() * n);
        const std::size_t j = 1 + static_cast<std::size_t>(pick.uniform() * n);
        const auto [c, se] = empirical_cov(samples, i, j);
        const double ref = covariance(spec, grid.node(i), grid.node(j));
        INFO("pair " << i << "," << j << " emp " << c << " ref " << ref << " se " << se);
        CHECK(std::abs(c - ref) <= 4.0 * se);
    }
}

}  // namespace

TEST_SUITE("sampling") {

TEST_CASE("brownian kernel gives cumulative sums") {
    const PathGrid grid(16, 1);
    const GaussianSampler sampler(KernelSpec::riemann_liouville(0.5, 1), grid);
    for (std::uint64_t k = 0; k < 5; ++k) {
        const auto s = sampler.draw(3, k);
        double acc = 0.0;
        for (std::size_t i = 0; i < 16; ++i) {
            acc += s.b_increments[i];
            CHECK(s.vol_path[i + 1] == doctest::Approx(acc).epsilon(1e-13));
        }
        CHECK(s.vol_path[0] == 0.0);
    }
}

TEST_CASE("draws are deterministic and thread independent") {
    const PathGrid grid(32, 1);
    const auto spec = KernelSpec::fbm(0.3, 1);
    setenv("GSV_THREADS", "1", 1);
    const auto a = sample_gaussian_paths(spec, grid, 3000, 11);
    setenv("GSV_THREADS", "4", 1);
    const auto b = sample_gaussian_paths(spec, grid, 3000, 11);
    unsetenv("GSV_THREADS");
    for (std::size_t k = 0; k < a.size(); ++k) {
        CHECK(a[k].vol_path == b[k].vol_path);
        CHECK(a[k].w_increments == b[k].w_increments);
    }
}

TEST_CASE("joint law: hatf of the driving increments is the volatility path") {
    const PathGrid grid(64, 1);
    for (const auto& spec : {KernelSpec::fbm(0.7, 1), KernelSpec::riemann_liouville(0.3, 1)}) {
        const GaussianSampler sampler(spec, grid);
        const auto s = sampler.draw(5, 17);
        std::vector<double> fdot(64);
        for (std::size_t j = 0; j < 64; ++j) fdot[j] = s.b_increments[j] / grid.dt();
        const auto f = hatf(spec, fdot, grid);
        for (std::size_t i = 0; i <= 64; ++i) CHECK(f[i] == doctest::Approx(s.vol_path[i]).epsilon(1e-14));
    }
}

TEST_CASE("W increments are standard and independent of B") {
    const PathGrid grid(8, 2);
    const auto samples = sample_gaussian_paths(KernelSpec::riemann_liouville(0.5, 2), grid, 50000, 8);
    std::vector<double> w, bw;
    for (const auto& s : samples) {
        w.push_back(s.w_increments[3] * s.w_increments[3]);
        bw.push_back(s.w_increments[3] * s.b_increments[3]);
    }
    const auto mw = oracle::moments(w);
    CHECK(std::abs(mw.mean - grid.dt()) <= 4 * mw.se);
    const auto mb = oracle::moments(bw);
    CHECK(std::abs(mb.mean) <= 4 * mb.se);
}

TEST_CASE("fBM covariance at 0.5 and 1 with the kernel backend") {
    const PathGrid grid(64, 1);
    const auto samples = sample_gaussian_paths(KernelSpec::fbm(0.7, 1), grid, 100000, 77);
    const auto [c, se] = empirical_cov(samples, 32, 64);
    const double ref = 0.5 * (1.0 + std::pow(0.5, 1.4) - std::pow(0.5, 1.4));
    CHECK(std::abs(c - ref) <= 3.0 * se);
}

TEST_CASE("sampling law per family") {
    check_law(KernelSpec::fbm(0.7, 1), PathGrid(32, 1), SamplingBackend::covariance, 100000);
    check_law(KernelSpec::fbm(0.3, 1), PathGrid(32, 1), SamplingBackend::kernel, 100000);
    check_law(KernelSpec::riemann_liouville(0.75, 1), PathGrid(32, 1), SamplingBackend::kernel, 100000);
    check_law(KernelSpec::riemann_liouville(0.3, 1), PathGrid(32, 1), SamplingBackend::covariance, 100000);
    check_law(KernelSpec::fractional_ou(0.7, 1.0, 1), PathGrid(8, 1), SamplingBackend::covariance, 100000);
}

}
