#include "gsv/pricing.hpp"

#include <cmath>
#include <limits>

#include <boost/math/quadrature/exp_sinh.hpp>

#include "gsv/closed_form.hpp"
#include "gsv/error.hpp"
#include "gsv/growth.hpp"
#include "gsv/normal.hpp"

namespace gsv {

double AsymptoticTerm::evaluate(double eps) const {
    double v = coefficient * std::exp(eps_exponent * std::log(eps));
    if (log_correction) v /= std::sqrt(std::log(1.0 / eps));
    return v;
}

double bs_dimensionless_call(double k, double nu) {
    require(std::isfinite(k), "log-strike must be finite");
    require(nu >= 0.0, "total volatility must be nonnegative");
    if (nu == 0.0) return std::max(1.0 - std::exp(k), 0.0);
    const double d = -k / nu;
    return normal_cdf(d + 0.5 * nu) - std::exp(k) * normal_cdf(d - 0.5 * nu);
}

double implied_vol(double k, double price) {
    require(std::isfinite(k) && std::isfinite(price), "implied vol inputs must be finite");
    double lo = 1e-8;
    double hi = 1e3;
    const double p_lo = bs_dimensionless_call(k, lo);
    const double p_hi = bs_dimensionless_call(k, hi);
    // a few ulps of slack at the intrinsic end, where deep in-the-money prices round onto it
    const double slack = 8.0 * std::numeric_limits<double>::epsilon();
    if (!(price >= p_lo - slack && price < p_hi) || price < 0.0 || price >= 1.0)
        fail(ErrorCode::price_out_of_range, "price is outside the range of the normalized call");
    if (price <= p_lo) return lo;
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        if (bs_dimensionless_call(k, mid) < price)
            lo = mid;
        else
            hi = mid;
    }
    const double r_lo = std::abs(bs_dimensionless_call(k, lo) - price);
    const double r_hi = std::abs(bs_dimensionless_call(k, hi) - price);
    return r_lo <= r_hi ? lo : hi;
}

AsymptoticTerm call_asymptote(const ModelSpec& model, const ScalingParams& scaling, double x,
                              std::optional<double> ldp_rate) {
    require(x > 0.0, "x must be positive");
    const Regime regime = scaling.regime();
    if (regime != Regime::ldp && regime != Regime::mdp)
        fail(ErrorCode::wrong_regime, "call decay asymptote covers LDP and MDP regimes only");
    const GrowthWitness growth = growth_class(model.sigma);
    if (growth.cls != GrowthClass::linear)
        fail(ErrorCode::growth_violation, "volatility grows faster than linearly; the call estimates do not apply");
    AsymptoticTerm term;
    term.regime = regime;
    term.eps_exponent = 2.0 * scaling.alpha + 2.0 * scaling.beta - 2.0 * scaling.H;
    if (regime == Regime::ldp) {
        require(ldp_rate.has_value(), "LDP call asymptote needs the rate value I_T(x)");
        term.coefficient = *ldp_rate;
        term.description = "log C ~ -I_T(x) eps^(2a+2b-2H)";
    } else {
        term.coefficient = mdp_rate_terminal(model.sigma.sigma0(), model.T, x);
        term.description = "log C ~ -x^2/(2 T sigma0^2) eps^(2a+2b-2H)";
    }
    return term;
}

double call_limit_cl(double sigma0, double T, double x) {
    require(sigma0 > 0.0 && T > 0.0 && x >= 0.0, "sigma0, T must be positive and x nonnegative");
    return bs_dimensionless_call(x, std::sqrt(T) * sigma0);
}

AsymptoticTerm call_exceptional(double sigma0, double T, double x, double alpha) {
    require(sigma0 > 0.0 && T > 0.0 && x >= 0.0, "sigma0, T must be positive and x nonnegative");
    require(alpha > 0.0, "exceptional regime needs alpha > 0");
    const double c = std::sqrt(T) * sigma0;
    boost::math::quadrature::exp_sinh<double> integrator;
    const double integral = integrator.integrate([&](double y) { return normal_sf((x + y) / c); }, 0.0,
                                                 std::numeric_limits<double>::infinity(), 1e-13);
    AsymptoticTerm term;
    term.coefficient = integral;
    term.eps_exponent = alpha;
    term.regime = Regime::exceptional;
    term.description = "C ~ eps^alpha int_x^inf Nbar(y/(sqrt(T) sigma0)) dy";
    return term;
}

AsymptoticTerm iv_asymptote(const ScalingParams& scaling, double x, double sigma0, double T,
                            std::optional<double> ldp_rate) {
    require(sigma0 > 0.0 && T > 0.0, "sigma0 and T must be positive");
    AsymptoticTerm term;
    term.regime = scaling.regime();
    switch (term.regime) {
        case Regime::ldp:
            require(ldp_rate.has_value(), "LDP implied vol needs the rate value I_T(x)");
            if (!(*ldp_rate > 0.0)) fail(ErrorCode::zero_rate, "rate I_T(x) is zero");
            term.coefficient = x / std::sqrt(2.0 * *ldp_rate);
            term.eps_exponent = scaling.H - scaling.beta - 0.5;
            term.description = "x / sqrt(2 I_T(x)) eps^(H-b-1/2)";
            break;
        case Regime::mdp:
            term.coefficient = std::sqrt(T) * sigma0;
            term.eps_exponent = scaling.H - scaling.beta - 0.5;
            term.description = "sqrt(T) sigma0 eps^(H-b-1/2)";
            break;
        case Regime::cl:
            term.coefficient = std::sqrt(T) * sigma0;
            term.eps_exponent = -0.5;
            term.description = "sqrt(T) sigma0 eps^(-1/2)";
            break;
        case Regime::exceptional:
            require(x > 0.0, "exceptional implied vol needs x > 0");
            term.coefficient = x / std::sqrt(2.0 * scaling.alpha);
            term.eps_exponent = scaling.alpha - 0.5;
            term.log_correction = true;
            term.description = "x / sqrt(2 alpha) eps^(alpha-1/2) / sqrt(log(1/eps))";
            break;
    }
    return term;
}

}  // namespace gsv
