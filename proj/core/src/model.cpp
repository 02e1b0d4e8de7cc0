#include "gsv/model.hpp"

#include <cmath>

#include "gsv/error.hpp"

namespace gsv {

namespace {
constexpr double boundary_tol = 1e-12;
}

double ModelSpec::rho_bar() const { return std::sqrt(std::max(0.0, 1.0 - rho * rho)); }

void ModelSpec::validate() const {
    kernel.validate();
    require(std::isfinite(rho) && std::abs(rho) <= 1.0, "correlation rho must lie in [-1,1]");
    require(std::isfinite(T) && T > 0.0, "model horizon T must be positive");
    require(kernel.T >= T * (1.0 - 1e-12), "kernel horizon must cover the model horizon");
    require(std::isfinite(s0) && s0 > 0.0, "initial price s0 must be positive");
    require(sigma.sigma0() > 0.0, "volatility must be positive at 0");
}

std::string to_string(Regime regime) {
    switch (regime) {
        case Regime::ldp: return "LDP";
        case Regime::mdp: return "MDP";
        case Regime::exceptional: return "EXCEPTIONAL";
        case Regime::cl: return "CL";
    }
    return "unknown";
}

void ScalingParams::validate() const {
    require(std::isfinite(eps) && eps > 0.0 && eps <= 1.0, "eps must lie in (0,1]");
    require(std::isfinite(H) && H > 0.0, "scaling exponent H must be positive");
    require(std::isfinite(beta) && beta >= 0.0 && beta <= H * (1.0 + boundary_tol), "beta must lie in [0,H]");
    require(std::isfinite(alpha) && alpha >= 0.0, "alpha must be nonnegative");
    require(alpha + beta <= H * (1.0 + boundary_tol), "alpha + beta must not exceed H");
}

Regime ScalingParams::regime() const {
    validate();
    const double tol = boundary_tol * H;
    const double sum = alpha + beta;
    if (sum <= tol) return Regime::ldp;
    if (std::abs(beta - H) <= tol) {
        require(alpha <= tol, "beta = H requires alpha = 0");
        return Regime::cl;
    }
    if (std::abs(sum - H) <= tol) return Regime::exceptional;
    return Regime::mdp;
}

double ScalingParams::eps_pow(double p) const {
    if (p == 0.0) return 1.0;
    return std::exp(p * std::log(eps));
}

}  // namespace gsv
