#include "gsv/explosion.hpp"

#include <cmath>
#include <numbers>

#include "gsv/error.hpp"
#include "gsv/kernels.hpp"

namespace gsv {

std::string to_string(CertificateStatus status) {
    return status == CertificateStatus::certified_above ? "CERTIFIED_ABOVE" : "NOT_FOUND";
}

double integrated_variance(const KernelSpec& kernel, const PathGrid& grid, double t) {
    const std::size_t m = grid.node_index(t);
    require(m >= 1, "t must be positive");
    const double dt = grid.dt();
    double v = 0.0;
    for (std::size_t i = 1; i <= m; ++i) {
        const double wi = (i == m ? 0.5 : 1.0) * dt;
        for (std::size_t k = 1; k <= i; ++k) {
            const double wk = (k == m ? 0.5 : 1.0) * dt;
            const double c = covariance(kernel, grid.node(i), grid.node(k));
            v += (k == i ? 1.0 : 2.0) * wi * wk * c;
        }
    }
    if (!(v > 0.0)) fail(ErrorCode::nonpositive_variance, "variance of the integrated volatility process is not positive");
    return v;
}

double jensen_lower_bound(const GrowthWitness& witness, double gamma, double t, double u, double v) {
    require(witness.cls == GrowthClass::convex_minorant && witness.sigma_tilde, "bound needs a convex minorant witness");
    require(gamma > 0.0 && t > 0.0, "gamma and t must be positive");
    require(u >= witness.x3, "u must lie beyond the witness threshold");
    if (!(v > 0.0)) fail(ErrorCode::nonpositive_variance, "variance v must be positive");
    const double tu = t * u;
    const double tail = std::log(std::sqrt(2.0 / std::numbers::pi) * std::sqrt(v) / (tu + std::sqrt(tu * tu + 4.0 * v)));
    return gamma * t * witness.sigma_tilde(u) - tu * tu / (2.0 * v) + tail;
}

double jensen_lower_bound(const ModelSpec& model, const GrowthWitness& witness, double gamma, double t, double u,
                          const PathGrid& grid) {
    return jensen_lower_bound(witness, gamma, t, u, integrated_variance(model.kernel, grid, t));
}

ExplosionCertificate explosion_certificate(const ModelSpec& model, const GrowthWitness& witness, double gamma,
                                           double t, double M, const PathGrid& grid) {
    model.validate();
    ExplosionCertificate cert;
    cert.gamma = gamma;
    cert.t = t;
    cert.M = M;
    cert.variance_v = integrated_variance(model.kernel, grid, t);
    const double u0 = witness.x3 > 0.0 ? witness.x3 : 1.0;
    for (int k = 0; k <= 60; ++k) {
        const double u = std::ldexp(u0, k);
        const double bound = jensen_lower_bound(witness, gamma, t, u, cert.variance_v);
        cert.steps = k + 1;
        cert.u_star = u;
        cert.log_lower_bound = bound;
        if (bound > M) {
            cert.status = CertificateStatus::certified_above;
            break;
        }
    }
    cert.log_variance_bound = cert.log_lower_bound - gamma * t * witness.offset;
    if (cert.status == CertificateStatus::not_found) {
        cert.note = witness.note.find("linear growth") != std::string::npos
                        ? "witness grows linearly; no certificate is expected for small gamma"
                        : "search budget of 61 geometric steps exhausted";
    }
    return cert;
}

MomentReduction moment_reduction(double gamma, double rho) {
    require(std::isfinite(gamma), "gamma must be finite");
    require(std::abs(rho) <= 1.0, "rho must lie in [-1,1]");
    return {0.5 * (gamma * gamma * (1.0 - rho * rho) - gamma), gamma * rho};
}

HolderSplit holder_split(double gamma, double rho) {
    require(std::isfinite(gamma), "gamma must be finite");
    require(rho != 0.0 && std::abs(rho) <= 1.0, "holder split needs 0 < |rho| <= 1");
    const double q = 1.0 - rho * rho;
    const double r2 = rho * rho;
    HolderSplit s;
    if (gamma < 0.0) {
        s.p = 1.0 + 2.0 * gamma * gamma * r2 / (gamma * gamma * q + std::abs(gamma));
    } else if (gamma * q > 1.0) {
        s.p = 1.0 + 2.0 * gamma * r2 / (gamma * q - 1.0);
    } else {
        fail(ErrorCode::inapplicable_gamma, "gamma lies in [0, 1/(1-rho^2)]");
    }
    s.eta = -gamma * rho / (s.p - 1.0);
    s.l = gamma * gamma * q - gamma - gamma * gamma * r2 / (s.p - 1.0);
    return s;
}

namespace {

ScalingParams unit_scaling() {
    ScalingParams s;
    s.eps = 1.0;
    s.H = 1.0;
    s.beta = 0.0;
    s.alpha = 0.0;
    return s;
}

}  // namespace

MCEstimate truncated_moment_mc(const ModelSpec& model, double gamma, double t, double M, const PathGrid& grid,
                               std::size_t count, std::uint64_t seed, SimulationOptions options) {
    require(M > 0.0, "truncation M must be positive");
    const std::size_t m = grid.node_index(t);
    const LogPriceSimulator sim(model, unit_scaling(), grid, options);
    const double log_m = std::log(M);
    return monte_carlo(sim, count, seed, [&](std::uint64_t k, LogPriceSimulator::Workspace& ws) {
        sim.run(seed, k, nullptr, ws);
        return std::exp(std::min(gamma * ws.x[m], log_m));
    });
}

MCEstimate exp_variance_moment_mc(const ModelSpec& model, double gamma, double t, double M, const PathGrid& grid,
                                  std::size_t count, std::uint64_t seed, SimulationOptions options) {
    require(gamma > 0.0 && M > 0.0, "gamma and M must be positive");
    const std::size_t m = grid.node_index(t);
    const LogPriceSimulator sim(model, unit_scaling(), grid, options);
    const double log_m = std::log(M);
    return monte_carlo(sim, count, seed, [&](std::uint64_t k, LogPriceSimulator::Workspace& ws) {
        sim.run(seed, k, nullptr, ws);
        return std::exp(std::min(gamma * ws.integrated_variance[m], log_m));
    });
}

}  // namespace gsv
