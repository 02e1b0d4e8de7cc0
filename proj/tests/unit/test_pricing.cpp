#include "doctest.h"
#include "gsv/closed_form.hpp"
#include "gsv/error.hpp"
#include "gsv/normal.hpp"
#include "gsv/pricing.hpp"
#include "gsv/random.hpp"
#include "gsv/simulate.hpp"
#include "oracles.hpp"

using namespace gsv;

namespace {

ModelSpec make(KernelSpec k, VolFunction s, double rho = 0.0) { return ModelSpec{k, s, rho, k.T, 1.0}; }

template <class F>
ErrorCode code_of(F&& f) {
    try {
        f();
    } catch (const Error& e) {
        return e.code();
    }
    return ErrorCode::unclassified;
}

}  // namespace

TEST_SUITE("pricing") {

TEST_CASE("normal distribution") {
    for (double z : {-30.0, -5.0, -1.0, 0.0, 0.3, 2.0, 8.0, 30.0}) {
        CHECK(normal_cdf(z) == doctest::Approx(oracle::ncdf(z)).epsilon(1e-14));
        CHECK(normal_sf(z) == doctest::Approx(oracle::nbar(z)).epsilon(1e-14));
    }
    // asymptotic series; the truncation error is far below the tolerance at 40
    const double z = 40.0, z2 = z * z;
    const double series = -0.5 * z2 - std::log(z * std::sqrt(2 * M_PI)) +
                          std::log(1 - 1 / z2 + 3 / (z2 * z2) - 15 / (z2 * z2 * z2) + 105 / (z2 * z2 * z2 * z2));
    CHECK(log_normal_sf(z) == doctest::Approx(series).epsilon(1e-13));
    CHECK(std::isfinite(log_normal_sf(1e3)));
}

TEST_CASE("normalized call values") {
    CHECK(bs_dimensionless_call(0.0, 0.2) == doctest::Approx(2 * oracle::ncdf(0.1) - 1).epsilon(1e-14));
    CHECK(bs_dimensionless_call(0.0, 0.2) == doctest::Approx(0.07966).epsilon(1e-4));
    CHECK(bs_dimensionless_call(0.1, 1e-9) == doctest::Approx(0.0));
    for (double k : {-0.3, 0.0, 0.2})
        for (double nu : {0.05, 0.4, 1.5}) CHECK(bs_dimensionless_call(k, nu) == doctest::Approx(oracle::bs_call(k, nu)).epsilon(1e-13));
}

TEST_CASE("call monotonicity and bounds") {
    for (int i = 0; i < 10; ++i) {
        const double k = 0.05 * i;
        double prev = -1.0;
        for (int j = 1; j <= 100; ++j) {
            const double nu = 0.02 * j;
            const double c = bs_dimensionless_call(k, nu);
            CHECK(c > prev);
            CHECK(c >= 0.0);
            CHECK(c < 1.0);
            CHECK(bs_dimensionless_call(k + 0.01, nu) < c);
            prev = c;
        }
    }
}

TEST_CASE("integral representation of the call") {
    for (double x : {0.0, 0.05, 0.1, 0.3, 0.8})
        for (double nu : {0.1, 0.2, 0.5, 1.0}) {
            // int_x^inf e^y Nbar(y/nu + nu/2) dy, truncated where the integrand is below 1e-300
            const double ref = oracle::simpson([&](double y) { return std::exp(y) * oracle::nbar(y / nu + nu / 2); }, x,
                                               x + 40 * nu + 5, 200000);
            CHECK(bs_dimensionless_call(x, nu) == doctest::Approx(ref).epsilon(1e-8));
        }
}

TEST_CASE("implied volatility inversion") {
    CHECK(implied_vol(0.1, bs_dimensionless_call(0.1, 0.3)) == doctest::Approx(0.3).epsilon(1e-10));
    CHECK(implied_vol(0.0, bs_dimensionless_call(0.0, 0.2)) == doctest::Approx(0.2).epsilon(1e-10));
    CHECK(implied_vol(0.1, 1e-12) < 0.05);
    RandomStream r(5, 0);
    for (int i = 0; i < 100; ++i) {
        const double k = -0.5 + r.uniform();
        const double nu = 0.02 + 2.0 * r.uniform();
        const double p = bs_dimensionless_call(k, nu);
        CHECK(std::abs(bs_dimensionless_call(k, implied_vol(k, p)) - p) <= 1e-10);
    }
    CHECK(code_of([] { implied_vol(0.1, 1.5); }) == ErrorCode::price_out_of_range);
    CHECK(code_of([] { implied_vol(0.1, -0.1); }) == ErrorCode::price_out_of_range);
}

TEST_CASE("call decay asymptotes") {
    const auto constant = make(KernelSpec::riemann_liouville(0.7, 1), VolFunction::constant(0.2));
    const ScalingParams mdp{0.1, 0.7, 0.3, 0.0};
    const auto m = call_asymptote(constant, mdp, 0.1);
    CHECK(m.coefficient == doctest::Approx(0.125).epsilon(1e-14));
    CHECK(m.eps_exponent == doctest::Approx(0.6 - 1.4));
    CHECK(m.regime == Regime::mdp);

    const ScalingParams ldp{0.1, 0.7, 0.0, 0.0};
    const auto l = call_asymptote(constant, ldp, 0.1, 0.1 * 0.1 / (2 * 0.04));
    CHECK(l.coefficient == doctest::Approx(0.125));

    const auto exp_model = make(KernelSpec::riemann_liouville(0.7, 1), VolFunction::exponential(0.5, 1.0));
    CHECK(code_of([&] { call_asymptote(exp_model, mdp, 0.1); }) == ErrorCode::growth_violation);
    CHECK(code_of([&] { call_asymptote(constant, ScalingParams{0.1, 0.7, 0.7, 0.0}, 0.1); }) == ErrorCode::wrong_regime);
}

TEST_CASE("central limit call") {
    CHECK(call_limit_cl(0.2, 1.0, 0.0) == doctest::Approx(2 * oracle::ncdf(0.1) - 1).epsilon(1e-14));
    const double ref = oracle::simpson([](double y) { return std::exp(y) * oracle::nbar(y / 0.2 + 0.1); }, 0.1, 12, 200000);
    CHECK(call_limit_cl(0.2, 1.0, 0.1) == doctest::Approx(ref).epsilon(1e-8));
    // Monte Carlo in the beta = H regime
    const auto model = make(KernelSpec::riemann_liouville(0.75, 1), VolFunction::bounded_smooth(0.2, 0.5));
    const auto e = estimate_call(model, ScalingParams{0.05, 0.75, 0.75, 0.0}, 0.1, PathGrid(64, 1), 100000, 41);
    CHECK(std::abs(e.mean - call_limit_cl(0.2, 1.0, 0.1)) <= 4 * e.std_error);
}

TEST_CASE("exceptional regime call") {
    const double c = 0.2;
    const auto t0 = call_exceptional(0.2, 1.0, 0.0, 0.3);
    CHECK(t0.coefficient == doctest::Approx(c / std::sqrt(2 * M_PI)).epsilon(1e-12));
    CHECK(t0.eps_exponent == 0.3);
    double prev = t0.coefficient;
    for (double x : {0.05, 0.1, 0.5, 2.0}) {
        const auto t = call_exceptional(0.2, 1.0, x, 0.3);
        const double ref = oracle::simpson([&](double y) { return oracle::nbar(y / c); }, x, x + 40 * c, 100000);
        CHECK(t.coefficient == doctest::Approx(ref).epsilon(1e-9));
        CHECK(t.coefficient < prev);
        prev = t.coefficient;
    }
    CHECK(call_exceptional(0.2, 1.0, 10.0, 0.3).coefficient < 1e-100);
}

TEST_CASE("implied volatility asymptotes") {
    const auto mdp = iv_asymptote(ScalingParams{0.1, 0.7, 0.3, 0.0}, 0.1, 0.2, 1.0);
    CHECK(mdp.coefficient == doctest::Approx(0.2));
    CHECK(mdp.eps_exponent == doctest::Approx(0.7 - 0.3 - 0.5));
    const auto cl = iv_asymptote(ScalingParams{0.1, 0.7, 0.7, 0.0}, 0.1, 0.2, 1.0);
    CHECK(cl.coefficient == doctest::Approx(0.2));
    CHECK(cl.eps_exponent == doctest::Approx(-0.5));
    // constant sigma: the LDP coefficient equals the MDP one
    for (double x : {0.05, 0.1, 0.4}) {
        const double rate = x * x / (2 * 1.5 * 0.04);
        const auto ldp = iv_asymptote(ScalingParams{0.1, 0.7, 0.0, 0.0}, x, 0.2, 1.5, rate);
        const auto m = iv_asymptote(ScalingParams{0.1, 0.7, 0.3, 0.0}, x, 0.2, 1.5);
        CHECK(std::abs(ldp.coefficient - m.coefficient) <= 1e-12);
    }
    const auto exc = iv_asymptote(ScalingParams{0.1, 0.7, 0.4, 0.3}, 0.1, 0.2, 1.0);
    CHECK(exc.log_correction);
    CHECK(exc.coefficient == doctest::Approx(0.1 / std::sqrt(0.6)));
    CHECK(code_of([] { iv_asymptote(ScalingParams{0.1, 0.7, 0.0, 0.0}, 0.0, 0.2, 1.0, 0.0); }) == ErrorCode::zero_rate);
}

}

TEST_SUITE("closed_form") {

TEST_CASE("moderate deviation rates") {
    CHECK(mdp_rate_terminal(0.2, 1.0, 0.0) == 0.0);
    CHECK(mdp_rate_terminal(0.2, 1.0, 0.1) == doctest::Approx(0.125).epsilon(1e-15));
    CHECK(mdp_rate_path(0.3, 1.0, std::vector<double>(9, 0.0)) == 0.0);
    std::vector<double> g{0.0, 0.1, -0.05, 0.2, 0.25};
    const double schilder = 0.5 * (0.01 + 0.0225 + 0.0625 + 0.0025) / 0.25;
    CHECK(mdp_rate_path(1.0, 1.0, g) == doctest::Approx(schilder));
    // straight line is the cheapest path to x
    std::vector<double> line(17);
    for (int j = 0; j <= 16; ++j) line[j] = 0.3 * j / 16.0;
    CHECK(mdp_rate_path(0.4, 1.0, line) == doctest::Approx(mdp_rate_terminal(0.4, 1.0, 0.3)).epsilon(1e-13));
    RandomStream r(3, 0);
    for (int k = 0; k < 50; ++k) {
        auto p = line;
        for (int j = 1; j < 16; ++j) p[j] += 0.02 * r.normal();
        CHECK(mdp_rate_path(0.4, 1.0, p) >= mdp_rate_terminal(0.4, 1.0, 0.3));
    }
}

TEST_CASE("central limit tail") {
    CHECK(cl_tail(0.2, 1.0, 0.0) == doctest::Approx(oracle::nbar(0.1)).epsilon(1e-14));
    CHECK(cl_tail(0.2, 1.0, 0.1) == doctest::Approx(oracle::nbar(0.6)).epsilon(1e-14));
    CHECK(cl_tail(0.2, 1.0, 0.1) == doctest::Approx(0.27425).epsilon(1e-4));
    CHECK(cl_tail(0.2, 1.0, 0.2) < cl_tail(0.2, 1.0, 0.1));
}

TEST_CASE("brownian maximum with drift") {
    for (double y : {0.1, 0.5, 1.0}) CHECK(bm_drift_max_cdf(0.0, 1.0, y) == doctest::Approx(2 * oracle::nbar(y)).epsilon(1e-14));
    CHECK(bm_drift_max_cdf(-0.3, 1.0, 1e-12) == doctest::Approx(1.0).epsilon(1e-9));
    const double ref = oracle::nbar(0.6) + std::exp(-0.1) * oracle::nbar(0.4);
    CHECK(bm_drift_max_cdf(-0.1, 1.0, 0.5) == doctest::Approx(ref).epsilon(1e-14));
    CHECK(cl_running_max(0.2, 1.0, 1e-12) == doctest::Approx(1.0).epsilon(1e-9));
    for (double x : {0.05, 0.1, 0.3}) CHECK(cl_running_max(0.2, 1.0, x) >= cl_tail(0.2, 1.0, x));
}

TEST_CASE("running maximum matches constant-volatility simulation") {
    const double s0 = 0.3, x = 0.2;
    const auto model = make(KernelSpec::riemann_liouville(0.6, 1), VolFunction::constant(s0));
    SimulationOptions opts;
    opts.bridge = true;
    const auto e = estimate_exit_prob(model, ScalingParams{0.2, 0.6, 0.6, 0.0}, -1e6, x, 1.0, PathGrid(64, 1), 100000,
                                      17, opts);
    CHECK(std::abs(e.mean - cl_running_max(s0, 1.0, x)) <= 4 * e.std_error);
}

TEST_CASE("small time rescaling") {
    const ScalingParams sp{1.0, 0.3, 0.1, 0.05};
    const auto r = small_time_rescale(KernelSpec::fbm(0.3, 1), sp, 0.25);
    CHECK(r.scaling.eps == 0.25);
    CHECK(r.scaling.H == 0.3);
    CHECK(r.scaling.beta == 0.1);
    CHECK(r.scaling.alpha == 0.05);
    CHECK(r.price_exponent == doctest::Approx(0.3 - 0.1 - 0.5));
    const auto id = small_time_rescale(KernelSpec::riemann_liouville(0.3, 1), sp, 1.0);
    CHECK(id.scaling.eps == 1.0);
    CHECK(code_of([&] { small_time_rescale(KernelSpec::fractional_ou(0.3, 1.0, 1), sp, 0.5); }) ==
          ErrorCode::not_self_similar);
}

}
