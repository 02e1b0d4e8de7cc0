#pragma once

#include <vector>

#include "gsv/kernels.hpp"
#include "gsv/model.hpp"

namespace gsv {

/// x^2 / (2 T sigma0^2).
double mdp_rate_terminal(double sigma0, double T, double x);

/// 1/(2 sigma0^2) sum gdot^2 dt for node values g on a uniform grid over [0, T].
double mdp_rate_path(double sigma0, double T, const std::vector<double>& g);

/// Nbar(x / (sqrt(T) sigma0) + sqrt(T) sigma0 / 2).
double cl_tail(double sigma0, double T, double x);

/// P(sup_{t <= T} (mu t + Z_t) > y) for standard Brownian Z:
///   Nbar((y - mu T)/sqrt T) + exp(2 mu y) Nbar((y + mu T)/sqrt T).
double bm_drift_max_cdf(double mu, double T, double y);

/// Limit of P(sup_t X_t > x) when beta = H: Brownian maximum with drift -sigma0/2 at level x/sigma0.
double cl_running_max(double sigma0, double T, double x);

struct SmallTimeScaling {
    ScalingParams scaling;  // eps replaced by the small time t
    double price_exponent;  // t^{H-beta-1/2} multiplies X_{tT}
    double drift_exponent;  // replacement drift carries t^{H-beta+1/2}
    double native_drift_exponent;  // small-noise drift carries t^{2H-2beta}
};

/// Small-time to small-noise transfer for self-similar kernels.
SmallTimeScaling small_time_rescale(const KernelSpec& kernel, const ScalingParams& scaling, double t);

}  // namespace gsv
