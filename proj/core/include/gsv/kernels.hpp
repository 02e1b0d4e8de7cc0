#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "gsv/grid.hpp"

namespace gsv {

enum class KernelFamily { fbm, riemann_liouville, fractional_ou, custom };

std::string to_string(KernelFamily family);

/// Volterra kernel family driving the volatility process  Bhat_t = int_0^t K(t,s) dB_s.
///
/// FBM uses the Molchan-Golosov kernel for joint sampling with B.
/// CUSTOM holds kernel values K(t_i, t_j) on a uniform grid of its own size,
/// strictly lower triangular, read as piecewise constant in s.
struct KernelSpec {
    KernelFamily family = KernelFamily::riemann_liouville;
    double hurst = 0.5;
    double a = 0.0;  // mean reversion, fractional OU only
    double T = 1.0;
    Eigen::MatrixXd custom;

    static KernelSpec fbm(double hurst, double T);
    static KernelSpec riemann_liouville(double hurst, double T);
    static KernelSpec fractional_ou(double hurst, double a, double T);
    static KernelSpec custom_grid(Eigen::MatrixXd values, double T);

    void validate() const;
    bool self_similar() const noexcept {
        return family == KernelFamily::fbm || family == KernelFamily::riemann_liouville;
    }
    std::size_t custom_steps() const noexcept {
        return custom.rows() > 0 ? static_cast<std::size_t>(custom.rows() - 1) : 0;
    }
};

/// K(t, s); zero for s >= t (the diagonal included).
double kernel_eval(const KernelSpec& spec, double t, double s);

/// Cov(Bhat_t, Bhat_s).
double covariance(const KernelSpec& spec, double t, double s);

/// Covariance at nodes 1..n (node 0 carries no variance).
Eigen::MatrixXd covariance_matrix(const KernelSpec& spec, const PathGrid& grid);

struct CholeskyResult {
    Eigen::MatrixXd lower;
    double jitter = 0.0;
};

/// Lower Cholesky factor. Adds lambda * I with lambda doubling from 1e-14 to
/// 1e-10 times the trace when plain factorization fails; NOT_PSD beyond that.
CholeskyResult cholesky_with_jitter(const Eigen::MatrixXd& matrix);

/// Linear map from a step control fdot (one value per interval) to
/// fhat(t_i) = int_0^{t_i} K(t_i, u) fdot(u) du at nodes 0..n.
class HatfOperator {
public:
    HatfOperator(const KernelSpec& spec, const PathGrid& grid);

    const PathGrid& grid() const noexcept { return grid_; }
    /// (n+1) x n, row i holds the integrals of K(t_i, .) over each interval.
    const Eigen::MatrixXd& weights() const noexcept { return weights_; }

    Eigen::VectorXd apply(const Eigen::VectorXd& fdot) const;
    /// Adjoint: gradient w.r.t. fdot of <g, fhat>.
    Eigen::VectorXd apply_transpose(const Eigen::VectorXd& g) const;

private:
    PathGrid grid_;
    Eigen::MatrixXd weights_;
};

std::vector<double> hatf(const KernelSpec& spec, const std::vector<double>& fdot, const PathGrid& grid);

/// Grid approximation of sup_{|t1-t2| <= h} int |K(t1,s) - K(t2,s)|^2 ds over node pairs.
double holder_modulus(const KernelSpec& spec, const PathGrid& grid, double h);

}  // namespace gsv
