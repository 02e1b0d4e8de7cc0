#include "doctest.h"
#include "gsv/error.hpp"
#include "gsv/model.hpp"

using namespace gsv;

TEST_SUITE("model") {

TEST_CASE("regime classification") {
    CHECK(ScalingParams{0.1, 0.7, 0.0, 0.0}.regime() == Regime::ldp);
    CHECK(ScalingParams{0.1, 0.7, 0.3, 0.1}.regime() == Regime::mdp);
    CHECK(ScalingParams{0.1, 0.7, 0.4, 0.3}.regime() == Regime::exceptional);
    CHECK(ScalingParams{0.1, 0.7, 0.7, 0.0}.regime() == Regime::cl);
    CHECK_THROWS_AS(ScalingParams({0.1, 0.7, 0.8, 0.0}).regime(), Error);
    CHECK_THROWS_AS(ScalingParams({0.1, 0.7, 0.5, 0.3}).regime(), Error);
    CHECK(to_string(Regime::exceptional) == "EXCEPTIONAL");
}

TEST_CASE("powers of eps stay finite for tiny eps") {
    const ScalingParams s{1e-300, 0.5, 0.1, 0.0};
    CHECK(s.eps_pow(0.8) > 0.0);
    CHECK(s.eps_pow(0.0) == 1.0);
    CHECK(s.speed_exponent() == doctest::Approx(0.8));
}

TEST_CASE("volatility families") {
    CHECK(VolFunction::affine(1, 2)(-0.5) == doctest::Approx(2.0));
    CHECK(VolFunction::exponential(0.5, 1)(1) == doctest::Approx(0.5 * std::exp(1.0)));
    CHECK(VolFunction::poly_plus(2, 4)(1.5) == doctest::Approx(2 * (1 + std::pow(1.5, 4))));
    CHECK(VolFunction::bounded_smooth(0.2, 0.5)(1) == doctest::Approx(0.2 * (1 + 0.5 * std::tanh(1.0))));
    const auto b = VolFunction::bounded_smooth(0.2, 0.5);
    for (double x : {-2.0, 0.0, 0.7}) CHECK(b.derivative(x) == doctest::Approx((b(x + 1e-6) - b(x - 1e-6)) / 2e-6).epsilon(1e-6));
    CHECK_THROWS(VolFunction::poly_plus(1, 3));
    CHECK_THROWS(VolFunction::bounded_smooth(0.2, 1.0));
}

TEST_CASE("model validation") {
    ModelSpec m{KernelSpec::fbm(0.3, 1), VolFunction::constant(0.2), 0.2, 1.0, 1.0};
    CHECK_NOTHROW(m.validate());
    CHECK(m.rho_bar() == doctest::Approx(std::sqrt(0.96)));
    m.rho = 1.5;
    CHECK_THROWS(m.validate());
}

}
