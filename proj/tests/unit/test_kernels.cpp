#include <Eigen/Eigenvalues>

#include "doctest.h"
#include "gsv/error.hpp"
#include "gsv/kernels.hpp"
#include "oracles.hpp"

using namespace gsv;

namespace {

double fbm_cov(double H, double t, double s) {
    return 0.5 * (std::pow(t, 2 * H) + std::pow(s, 2 * H) - std::pow(std::abs(t - s), 2 * H));
}

}  // namespace

TEST_SUITE("kernels") {

TEST_CASE("kernel values") {
    CHECK(kernel_eval(KernelSpec::riemann_liouville(0.5, 1), 1.0, 0.3) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(kernel_eval(KernelSpec::riemann_liouville(0.75, 1), 1.0, 0.0) ==
          doctest::Approx(1.0 / std::tgamma(1.25)).epsilon(1e-14));
    CHECK(kernel_eval(KernelSpec::riemann_liouville(0.75, 1), 1.0, 0.0) == doctest::Approx(1.10326).epsilon(1e-5));
}

TEST_CASE("volterra property for every family") {
    Eigen::MatrixXd k = Eigen::MatrixXd::Zero(5, 5);
    for (int i = 1; i < 5; ++i)
        for (int j = 0; j < i; ++j) k(i, j) = 1.0 + i - j;
    const std::vector<KernelSpec> specs{KernelSpec::fbm(0.3, 1), KernelSpec::fbm(0.7, 1),
                                        KernelSpec::riemann_liouville(0.3, 1), KernelSpec::fractional_ou(0.7, 1.0, 1),
                                        KernelSpec::custom_grid(k, 1)};
    for (const auto& spec : specs) {
        CHECK(kernel_eval(spec, 0.5, 1.0) == 0.0);
        CHECK(kernel_eval(spec, 0.5, 0.5) == 0.0);
        for (int i = 0; i <= 4; ++i)
            for (int j = i; j <= 4; ++j) CHECK(kernel_eval(spec, i / 4.0, j / 4.0) == 0.0);
    }
}

TEST_CASE("closed-form covariances") {
    CHECK(covariance(KernelSpec::fbm(0.7, 2), 2, 2) == doctest::Approx(std::pow(2.0, 1.4)).epsilon(1e-14));
    CHECK(covariance(KernelSpec::fbm(0.5, 1), 1, 0.4) == doctest::Approx(0.4).epsilon(1e-14));
    const double g = std::tgamma(1.25);
    CHECK(covariance(KernelSpec::riemann_liouville(0.75, 1), 1, 1) == doctest::Approx(1.0 / (1.5 * g * g)).epsilon(1e-12));
    CHECK(covariance(KernelSpec::riemann_liouville(0.75, 1), 1, 1) == doctest::Approx(0.8115).epsilon(1e-4));
}

TEST_CASE("RL covariance matches quadrature of kernel products") {
    for (double H : {0.2, 0.4, 0.75, 0.9}) {
        const auto spec = KernelSpec::riemann_liouville(H, 1);
        const double g = std::tgamma(H + 0.5);
        for (auto [t, s] : {std::pair{1.0, 0.5}, std::pair{0.8, 0.3}, std::pair{0.6, 0.55}}) {
            const double ref = oracle::smoothed(
                [&](double u) { return std::pow(t - u, H - 0.5) * std::pow(s - u, H - 0.5) / (g * g); }, 0.0, s);
            CHECK(covariance(spec, t, s) == doctest::Approx(ref).epsilon(1e-7));
            CHECK(covariance(spec, s, t) == covariance(spec, t, s));
        }
    }
}

TEST_CASE("fBM kernel reproduces the fBM covariance") {
    for (double H : {0.3, 0.7}) {
        const auto spec = KernelSpec::fbm(H, 1);
        for (auto [t, s] : {std::pair{1.0, 1.0}, std::pair{1.0, 0.5}, std::pair{0.7, 0.2}}) {
            const double ref = oracle::smoothed([&](double u) { return kernel_eval(spec, t, u) * kernel_eval(spec, s, u); },
                                                0.0, s, 4000, 10);
            CHECK(ref == doctest::Approx(fbm_cov(H, t, s)).epsilon(2e-6));
        }
    }
}

TEST_CASE("covariance matrix") {
    const Eigen::MatrixXd c = covariance_matrix(KernelSpec::fbm(0.5, 1), PathGrid(2, 1));
    CHECK(c(0, 0) == doctest::Approx(0.5));
    CHECK(c(0, 1) == doctest::Approx(0.5));
    CHECK(c(1, 0) == doctest::Approx(0.5));
    CHECK(c(1, 1) == doctest::Approx(1.0));

    for (const auto& spec : {KernelSpec::fbm(0.3, 1), KernelSpec::riemann_liouville(0.75, 1)}) {
        const PathGrid grid(16, 1);
        const Eigen::MatrixXd m = covariance_matrix(spec, grid);
        for (int i = 0; i < 16; ++i)
            for (int j = 0; j < 16; ++j) CHECK(m(i, j) == covariance(spec, grid.node(i + 1), grid.node(j + 1)));
        const auto chol = cholesky_with_jitter(m);
        CHECK(chol.jitter <= 1e-10 * m.trace());
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m);
        CHECK(es.eigenvalues().minCoeff() >= -chol.jitter);
        CHECK((chol.lower * chol.lower.transpose() - m).norm() <= 1e-9 * m.norm());
    }
}

TEST_CASE("cholesky jitter and failure") {
    Eigen::MatrixXd rank_one = Eigen::VectorXd::Ones(4) * Eigen::RowVectorXd::Ones(4);
    const auto r = cholesky_with_jitter(rank_one);
    CHECK(r.jitter > 0.0);
    CHECK(r.jitter <= 1e-10 * rank_one.trace());
    Eigen::MatrixXd indefinite = Eigen::MatrixXd::Identity(3, 3);
    indefinite(2, 2) = -1.0;
    try {
        cholesky_with_jitter(indefinite);
        FAIL("expected NOT_PSD");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::not_psd);
    }
}

TEST_CASE("nondegenerate variance") {
    for (const auto& spec : {KernelSpec::fbm(0.2, 1), KernelSpec::riemann_liouville(0.6, 1)})
        for (int i = 1; i <= 20; ++i) CHECK(covariance(spec, i / 20.0, i / 20.0) > 0.0);
}

TEST_CASE("hatf operator") {
    const PathGrid grid(32, 1);
    const std::vector<double> zero(32, 0.0), one(32, 1.0);
    for (const auto& spec : {KernelSpec::fbm(0.3, 1), KernelSpec::riemann_liouville(0.75, 1)}) {
        const auto f = hatf(spec, zero, grid);
        CHECK(std::all_of(f.begin(), f.end(), [](double v) { return v == 0.0; }));
    }
    const auto bm = hatf(KernelSpec::riemann_liouville(0.5, 1), one, grid);
    for (std::size_t i = 0; i <= 32; ++i) CHECK(bm[i] == doctest::Approx(grid.node(i)).epsilon(1e-13));
    const auto rl = hatf(KernelSpec::riemann_liouville(0.75, 1), one, grid);
    const double c = 1.25 * std::tgamma(1.25);
    for (std::size_t i = 0; i <= 32; ++i) CHECK(rl[i] == doctest::Approx(std::pow(grid.node(i), 1.25) / c).epsilon(1e-12));

    // fBM weights against direct quadrature of the kernel over each interval
    for (double H : {0.3, 0.7}) {
        const auto spec = KernelSpec::fbm(H, 1);
        const HatfOperator op(spec, PathGrid(8, 1));
        for (int i : {1, 4, 8}) {
            const double t = i / 8.0;
            for (int j = 0; j < i; ++j) {
                const double ref = oracle::smoothed([&](double s) { return kernel_eval(spec, t, s); }, j / 8.0,
                                                    (j + 1) / 8.0, 4000, 10);
                CHECK(op.weights()(i, j) == doctest::Approx(ref).epsilon(1e-7));
            }
        }
    }
}

TEST_CASE("hatf adjoint") {
    const PathGrid grid(16, 1);
    const HatfOperator op(KernelSpec::fbm(0.4, 1), grid);
    Eigen::VectorXd u = Eigen::VectorXd::LinSpaced(16, -1, 2);
    Eigen::VectorXd v = Eigen::VectorXd::LinSpaced(17, 0.5, -0.3);
    CHECK(v.dot(op.apply(u)) == doctest::Approx(u.dot(op.apply_transpose(v))).epsilon(1e-13));
}

TEST_CASE("custom kernel") {
    Eigen::MatrixXd k = Eigen::MatrixXd::Zero(5, 5);
    for (int i = 1; i < 5; ++i)
        for (int j = 0; j < i; ++j) k(i, j) = 0.5 + 0.1 * i * j;
    const auto spec = KernelSpec::custom_grid(k, 1);
    const PathGrid grid(4, 1);
    const HatfOperator op(spec, grid);
    for (int i = 1; i <= 4; ++i)
        for (int j = 0; j < i; ++j) CHECK(op.weights()(i, j) == doctest::Approx(k(i, j) * 0.25));
    // piecewise-constant product sum
    double ref = 0.0;
    for (int j = 0; j < 2; ++j) ref += k(4, j) * k(2, j) * 0.25;
    CHECK(covariance(spec, 1.0, 0.5) == doctest::Approx(ref));

    Eigen::MatrixXd upper = k;
    upper(1, 3) = 1.0;
    try {
        KernelSpec::custom_grid(upper, 1);
        FAIL("expected rejection");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::invalid_argument);
    }
    CHECK_THROWS(HatfOperator(spec, PathGrid(8, 1)));
}

TEST_CASE("fractional OU") {
    const auto spec = KernelSpec::fractional_ou(0.7, 1.0, 1);
    const double c = covariance(spec, 1.0, 0.5);
    CHECK(c == doctest::Approx(covariance(spec, 0.5, 1.0)));
    // weak mean reversion is close to fBM
    const auto weak = KernelSpec::fractional_ou(0.7, 1e-6, 1);
    CHECK(covariance(weak, 1.0, 0.5) == doctest::Approx(fbm_cov(0.7, 1.0, 0.5)).epsilon(1e-5));
    // variance from the discretized kernel agrees with the covariance quadrature
    const HatfOperator op(spec, PathGrid(32, 1));
    const double v = op.weights().row(32).squaredNorm() * 32.0;
    CHECK(v == doctest::Approx(covariance(spec, 1.0, 1.0)).epsilon(5e-3));
    // U = B - a int e^{-a(t-r)} B dr is a Gaussian integral of B; check the
    // variance by a direct Simpson double integral of the fBM covariance.
    const double a = 1.0, H = 0.7, t = 1.0;
    auto cross = [&](double r) { return std::exp(-a * (t - r)) * fbm_cov(H, r, t); };
    const double c1 = oracle::simpson(cross, 0.0, t, 400);
    const double c2 = oracle::simpson(
        [&](double r) {
            return std::exp(-a * (t - r)) *
                   oracle::simpson([&](double q) { return std::exp(-a * (t - q)) * fbm_cov(H, r, q); }, 0.0, t, 400);
        },
        0.0, t, 400);
    const double ref = fbm_cov(H, t, t) - 2 * a * c1 + a * a * c2;
    CHECK(covariance(spec, 1.0, 1.0) == doctest::Approx(ref).epsilon(1e-6));
}

TEST_CASE("holder modulus") {
    const auto spec = KernelSpec::riemann_liouville(0.75, 1);
    const PathGrid grid(64, 1);
    CHECK(holder_modulus(spec, grid, 0.0) == 0.0);
    double prev = 0.0;
    for (int k = 6; k >= 1; --k) {
        const double h = std::ldexp(1.0, -k);
        const double m = holder_modulus(spec, grid, h);
        CHECK(m >= prev);
        CHECK(m / std::pow(h, 1.5) < 2.0);
        prev = m;
    }
}

}
