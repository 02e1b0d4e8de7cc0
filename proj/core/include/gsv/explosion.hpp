#pragma once

#include <cstdint>
#include <string>

#include "gsv/grid.hpp"
#include "gsv/growth.hpp"
#include "gsv/model.hpp"
#include "gsv/simulate.hpp"

namespace gsv {

/// Variance of int_0^t Bhat_s ds by trapezoid tensor quadrature of the
/// covariance on the grid nodes in [0, t]; t must be a node.
double integrated_variance(const KernelSpec& kernel, const PathGrid& grid, double t);

/// log of the lower bound on E[exp(gamma int_0^t sigma_tilde(Bhat_s) ds)]:
///   gamma t sigma_tilde(u) - t^2 u^2 / (2v) + log(sqrt(2/pi) sqrt(v) / (t u + sqrt(t^2 u^2 + 4 v))).
double jensen_lower_bound(const GrowthWitness& witness, double gamma, double t, double u, double v);

/// Same bound with v computed from the model kernel on `grid`.
double jensen_lower_bound(const ModelSpec& model, const GrowthWitness& witness, double gamma, double t, double u,
                          const PathGrid& grid);

enum class CertificateStatus { certified_above, not_found };

std::string to_string(CertificateStatus status);

struct ExplosionCertificate {
    double gamma = 0.0;
    double t = 0.0;
    double M = 0.0;  // threshold on the log scale
    double u_star = 0.0;
    double log_lower_bound = 0.0;
    /// Bound for the integrated variance itself: log_lower_bound - gamma t offset.
    double log_variance_bound = 0.0;
    double variance_v = 0.0;
    int steps = 0;
    CertificateStatus status = CertificateStatus::not_found;
    std::string note;
};

/// Geometric search u = x3 * 2^k, k = 0..60, for a bound exceeding M.
ExplosionCertificate explosion_certificate(const ModelSpec& model, const GrowthWitness& witness, double gamma,
                                           double t, double M, const PathGrid& grid);

struct MomentReduction {
    double c_quad = 0.0;  // coefficient of int sigma^2 ds
    double c_lin = 0.0;   // coefficient of int sigma dB
};

/// E[S_t^gamma] = E[exp(c_quad int sigma^2 ds + c_lin int sigma dB)].
MomentReduction moment_reduction(double gamma, double rho);

struct HolderSplit {
    double p = 0.0;
    double eta = 0.0;
    double l = 0.0;
};

/// Holder exponent p > 1 and the resulting coefficients for gamma > 1/(1-rho^2) or gamma < 0.
HolderSplit holder_split(double gamma, double rho);

/// E[min(S_t^gamma, M)] with eps = 1; t must be a grid node.
MCEstimate truncated_moment_mc(const ModelSpec& model, double gamma, double t, double M, const PathGrid& grid,
                               std::size_t count, std::uint64_t seed, SimulationOptions options = {});

/// E[min(exp(gamma int_0^t sigma(Bhat)^2 ds), M)] with eps = 1; t must be a grid node.
MCEstimate exp_variance_moment_mc(const ModelSpec& model, double gamma, double t, double M, const PathGrid& grid,
                                  std::size_t count, std::uint64_t seed, SimulationOptions options = {});

}  // namespace gsv
