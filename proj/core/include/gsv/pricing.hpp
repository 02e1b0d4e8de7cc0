#pragma once

#include <optional>
#include <string>

#include "gsv/model.hpp"

namespace gsv {

/// Leading-order term  coefficient * eps^eps_exponent, optionally divided by sqrt(log(1/eps)).
struct AsymptoticTerm {
    double coefficient = 0.0;
    double eps_exponent = 0.0;
    bool log_correction = false;
    Regime regime = Regime::ldp;
    std::string description;

    double evaluate(double eps) const;
};

/// Normalized Black-Scholes call with unit spot and zero rate:
///   C(k, nu) = N(-k/nu + nu/2) - e^k N(-k/nu - nu/2).
double bs_dimensionless_call(double k, double nu);

/// Total volatility nu with bs_dimensionless_call(k, nu) = price, by bisection on [1e-8, 1e3].
double implied_vol(double k, double price);

/// Call-price decay: eps^{2H-2a-2b} log C -> -J.  Coefficient J, exponent 2a+2b-2H.
/// LDP needs the rate value I_T(x); MDP uses x^2/(2 T sigma0^2).
AsymptoticTerm call_asymptote(const ModelSpec& model, const ScalingParams& scaling, double x,
                              std::optional<double> ldp_rate = std::nullopt);

/// beta = H limit: C(x, sqrt(T) sigma0).
double call_limit_cl(double sigma0, double T, double x);

/// alpha + beta = H, beta != H: C ~ eps^alpha * int_x^inf Nbar(y / (sqrt(T) sigma0)) dy.
AsymptoticTerm call_exceptional(double sigma0, double T, double x, double alpha);

/// Leading implied-volatility term for the regime of `scaling`.
AsymptoticTerm iv_asymptote(const ScalingParams& scaling, double x, double sigma0, double T,
                            std::optional<double> ldp_rate = std::nullopt);

}  // namespace gsv
