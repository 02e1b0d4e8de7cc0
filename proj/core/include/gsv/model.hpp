#pragma once

#include <string>

#include "gsv/kernels.hpp"
#include "gsv/volatility.hpp"

namespace gsv {

struct ModelSpec {
    KernelSpec kernel;
    VolFunction sigma;
    double rho = 0.0;
    double T = 1.0;
    double s0 = 1.0;

    double rho_bar() const;
    void validate() const;
};

enum class Regime { ldp, mdp, exceptional, cl };

std::string to_string(Regime regime);

/// Small-noise parametrization (eps, H, beta, alpha) of the log-price.
struct ScalingParams {
    double eps = 1.0;
    double H = 0.5;
    double beta = 0.0;
    double alpha = 0.0;

    void validate() const;
    Regime regime() const;

    /// eps^p evaluated as exp(p log eps).
    double eps_pow(double p) const;
    /// Exponent 2H - 2alpha - 2beta applied to log-probabilities.
    double speed_exponent() const noexcept { return 2.0 * H - 2.0 * alpha - 2.0 * beta; }
};

}  // namespace gsv
