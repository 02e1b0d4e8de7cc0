#include "gsv/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>
#include <boost/math/special_functions/beta.hpp>

#include "gsv/error.hpp"
#include "gsv/parallel.hpp"

namespace gsv {

namespace {

using boost::math::quadrature::gauss_kronrod;
using boost::math::quadrature::tanh_sinh;

constexpr double quad_tol = 1e-12;

// One integrator per nesting depth; the abscissa tables grow lazily.
tanh_sinh<double>& ts_integrator(int depth) {
    thread_local tanh_sinh<double> integrators[2];
    return integrators[depth];
}

template <class F>
double integrate_singular(F f, double lo, double hi, int depth = 0) {
    if (!(hi > lo)) return 0.0;
    return ts_integrator(depth).integrate(f, lo, hi, quad_tol);
}

template <class F>
double integrate_smooth(F f, double lo, double hi) {
    if (!(hi > lo)) return 0.0;
    return gauss_kronrod<double, 31>::integrate(f, lo, hi, 12, quad_tol);
}

double mg_constant(double H) {
    return std::sqrt(2.0 * H * std::tgamma(1.5 - H) / (std::tgamma(H + 0.5) * std::tgamma(2.0 - 2.0 * H)));
}

// int_z^1 w^{-2H} (1-w)^{H-1/2} dw, with 1 - z passed separately.
// For H > 1/2 the first beta parameter is negative; one integration by parts
// moves it to 2 - 2H.
double mg_tail_integral(double H, double z, double one_minus_z) {
    using boost::math::beta;
    using boost::math::ibetac;
    if (H < 0.5) return beta(1.0 - 2.0 * H, H + 0.5) * ibetac(1.0 - 2.0 * H, H + 0.5, z);
    const double a = 1.0 - 2.0 * H;
    const double boundary = -std::pow(z, a) * std::pow(one_minus_z, H - 0.5) / a;
    return boundary + (H - 0.5) / a * beta(2.0 - 2.0 * H, H - 0.5) * ibetac(2.0 - 2.0 * H, H - 0.5, z);
}

// Molchan-Golosov kernel with the lag t - s passed separately so that
// singular behaviour near the diagonal is evaluated without cancellation.
double mg_kernel(double H, double t, double s, double lag) {
    if (lag <= 0.0) return 0.0;
    if (H == 0.5) return 1.0;
    if (s <= 0.0) return std::numeric_limits<double>::infinity();
    const double a = H - 0.5;
    const double head = std::pow(t / s, a) * std::pow(lag, a);
    const double tail = a * std::pow(s, a) * mg_tail_integral(H, s / t, lag / t);
    return mg_constant(H) * (head - tail);
}

double rl_kernel(double H, double lag) {
    if (lag <= 0.0) return 0.0;
    return std::pow(lag, H - 0.5) / std::tgamma(H + 0.5);
}

double fou_kernel(double H, double a, double t, double s, double lag) {
    if (lag <= 0.0) return 0.0;
    // int_s^t e^{-a(t-r)} K_H(r, s) dr, written in the lag v = r - s.
    const double smoothing = integrate_singular(
        [&](double v) { return std::exp(-a * (lag - v)) * mg_kernel(H, s + v, s, v); }, 0.0, lag, 1);
    return mg_kernel(H, t, s, lag) - a * smoothing;
}

std::size_t custom_row(const KernelSpec& spec, double t) {
    const double dt = spec.T / static_cast<double>(spec.custom_steps());
    const double r = std::round(t / dt);
    return static_cast<std::size_t>(std::clamp(r, 0.0, static_cast<double>(spec.custom_steps())));
}

std::size_t custom_col(const KernelSpec& spec, double s) {
    const double dt = spec.T / static_cast<double>(spec.custom_steps());
    const double c = std::floor(s / dt * (1.0 + 1e-14));
    return static_cast<std::size_t>(std::clamp(c, 0.0, static_cast<double>(spec.custom_steps() - 1)));
}

double kernel_lag(const KernelSpec& spec, double t, double s, double lag) {
    if (lag <= 0.0) return 0.0;
    switch (spec.family) {
        case KernelFamily::riemann_liouville:
            return rl_kernel(spec.hurst, lag);
        case KernelFamily::fbm:
            return mg_kernel(spec.hurst, t, s, lag);
        case KernelFamily::fractional_ou:
            return fou_kernel(spec.hurst, spec.a, t, s, lag);
        case KernelFamily::custom: {
            const std::size_t i = custom_row(spec, t);
            const std::size_t j = custom_col(spec, s);
            return j < i ? spec.custom(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) : 0.0;
        }
    }
    return 0.0;
}

double fbm_covariance(double H, double t, double s) {
    return 0.5 * (std::pow(t, 2.0 * H) + std::pow(s, 2.0 * H) - std::pow(std::abs(t - s), 2.0 * H));
}

// int_0^t e^{-a(t-r)} C_H(r, s) dr, split at the kink r = s.
double fou_smoothed(double H, double a, double t, double s) {
    auto f = [&](double r) { return std::exp(-a * (t - r)) * fbm_covariance(H, r, s); };
    if (s > 0.0 && s < t) return integrate_singular(f, 0.0, s) + integrate_singular(f, s, t);
    return integrate_singular(f, 0.0, t);
}

// U_t = B_t - a int_0^t e^{-a(t-r)} B_r dr expanded bilinearly.
double fou_covariance(double H, double a, double t, double s) {
    const double cross_t = fou_smoothed(H, a, t, s);
    const double cross_s = fou_smoothed(H, a, s, t);
    // inner integrand is smooth away from r = s
    auto inner = [&](double r) {
        auto g = [&](double q) { return std::exp(-a * (s - q)) * fbm_covariance(H, q, r); };
        const double m = std::min(r, s);
        return std::exp(-a * (t - r)) * (integrate_singular(g, 0.0, m, 1) + integrate_singular(g, m, s, 1));
    };
    double both = 0.0;
    if (s > 0.0 && s < t)
        both = integrate_singular(inner, 0.0, s) + integrate_singular(inner, s, t);
    else
        both = integrate_singular(inner, 0.0, t);
    return fbm_covariance(H, t, s) - a * cross_t - a * cross_s + a * a * both;
}

double custom_covariance(const KernelSpec& spec, double t, double s) {
    const std::size_t i = custom_row(spec, t);
    const std::size_t k = custom_row(spec, s);
    const double dt = spec.T / static_cast<double>(spec.custom_steps());
    double acc = 0.0;
    for (std::size_t j = 0; j < std::min(i, k); ++j)
        acc += spec.custom(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) *
               spec.custom(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(j));
    return acc * dt;
}

}  // namespace

std::string to_string(KernelFamily family) {
    switch (family) {
        case KernelFamily::fbm: return "fbm";
        case KernelFamily::riemann_liouville: return "rl";
        case KernelFamily::fractional_ou: return "fou";
        case KernelFamily::custom: return "custom";
    }
    return "unknown";
}

KernelSpec KernelSpec::fbm(double hurst, double T) {
    KernelSpec k;
    k.family = KernelFamily::fbm;
    k.hurst = hurst;
    k.T = T;
    k.validate();
    return k;
}

KernelSpec KernelSpec::riemann_liouville(double hurst, double T) {
    KernelSpec k;
    k.family = KernelFamily::riemann_liouville;
    k.hurst = hurst;
    k.T = T;
    k.validate();
    return k;
}

KernelSpec KernelSpec::fractional_ou(double hurst, double a, double T) {
    KernelSpec k;
    k.family = KernelFamily::fractional_ou;
    k.hurst = hurst;
    k.a = a;
    k.T = T;
    k.validate();
    return k;
}

KernelSpec KernelSpec::custom_grid(Eigen::MatrixXd values, double T) {
    KernelSpec k;
    k.family = KernelFamily::custom;
    k.custom = std::move(values);
    k.T = T;
    k.validate();
    return k;
}

void KernelSpec::validate() const {
    require(std::isfinite(T) && T > 0.0, "kernel horizon T must be positive");
    if (family == KernelFamily::custom) {
        require(custom.rows() >= 2 && custom.rows() == custom.cols(), "custom kernel must be a square (n+1)x(n+1) matrix");
        for (Eigen::Index i = 0; i < custom.rows(); ++i)
            for (Eigen::Index j = i; j < custom.cols(); ++j)
                require(custom(i, j) == 0.0, "custom kernel must be strictly lower triangular");
        require(custom.allFinite(), "custom kernel entries must be finite");
        return;
    }
    require(hurst > 0.0 && hurst < 1.0, "Hurst parameter must lie in (0,1)");
    if (family == KernelFamily::fractional_ou) require(a > 0.0, "mean reversion a must be positive");
}

double kernel_eval(const KernelSpec& spec, double t, double s) {
    require(t >= 0.0 && s >= 0.0 && t <= spec.T * (1 + 1e-12) && s <= spec.T * (1 + 1e-12),
            "kernel arguments must lie in [0,T]");
    if (s >= t) return 0.0;
    return kernel_lag(spec, t, s, t - s);
}

double covariance(const KernelSpec& spec, double t, double s) {
    require(t >= 0.0 && s >= 0.0 && t <= spec.T * (1 + 1e-12) && s <= spec.T * (1 + 1e-12),
            "covariance arguments must lie in [0,T]");
    if (t <= 0.0 || s <= 0.0) return 0.0;
    const double H = spec.hurst;
    switch (spec.family) {
        case KernelFamily::fbm:
            return fbm_covariance(H, t, s);
        case KernelFamily::fractional_ou:
            return fou_covariance(H, spec.a, std::max(t, s), std::min(t, s));
        case KernelFamily::custom:
            return custom_covariance(spec, t, s);
        case KernelFamily::riemann_liouville: {
            const double g = std::tgamma(H + 0.5);
            if (t == s) return std::pow(t, 2.0 * H) / (2.0 * H * g * g);
            const double hi = std::max(t, s);
            const double lo = std::min(t, s);
            // Lag v = lo - u keeps the singular factor exact near u = lo.
            return integrate_singular([&](double v) { return rl_kernel(H, hi - lo + v) * rl_kernel(H, v); }, 0.0, lo);
        }
    }
    return 0.0;
}

Eigen::MatrixXd covariance_matrix(const KernelSpec& spec, const PathGrid& grid) {
    const auto n = static_cast<Eigen::Index>(grid.steps());
    Eigen::MatrixXd c(n, n);
    // fOU entries are nested quadratures, so rows are spread over threads.
    parallel_for(static_cast<std::size_t>(n), [&](std::size_t begin, std::size_t end) {
        for (auto i = static_cast<Eigen::Index>(begin); i < static_cast<Eigen::Index>(end); ++i) {
            for (Eigen::Index j = 0; j <= i; ++j) {
                const double v = covariance(spec, grid.node(static_cast<std::size_t>(i + 1)),
                                            grid.node(static_cast<std::size_t>(j + 1)));
                c(i, j) = v;
                c(j, i) = v;
            }
        }
    }, spec.family == KernelFamily::fractional_ou ? 1 : 256);
    return c;
}

CholeskyResult cholesky_with_jitter(const Eigen::MatrixXd& matrix) {
    const double trace = matrix.trace();
    double lambda = 0.0;
    const double start = 1e-14 * trace;
    const double stop = 1e-10 * trace;
    const auto n = matrix.rows();
    while (true) {
        Eigen::MatrixXd shifted = matrix;
        shifted.diagonal().array() += lambda;
        Eigen::LLT<Eigen::MatrixXd> llt(shifted);
        if (llt.info() == Eigen::Success) {
            Eigen::MatrixXd lower = llt.matrixL();
            if (lower.allFinite()) return {lower, lambda};
        }
        if (lambda == 0.0) {
            lambda = start;
        } else {
            if (lambda >= stop) break;
            lambda = std::min(2.0 * lambda, stop);
        }
        if (n == 0) break;
    }
    fail(ErrorCode::not_psd, "covariance matrix is not positive semidefinite within jitter 1e-10*trace");
}

HatfOperator::HatfOperator(const KernelSpec& spec, const PathGrid& grid) : grid_(grid) {
    spec.validate();
    const std::size_t n = grid.steps();
    const double dt = grid.dt();
    weights_ = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n + 1), static_cast<Eigen::Index>(n));
    auto w = [&](std::size_t i, std::size_t j) -> double& {
        return weights_(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
    };

    switch (spec.family) {
        case KernelFamily::riemann_liouville: {
            const double p = spec.hurst + 0.5;
            const double scale = 1.0 / (p * std::tgamma(p));
            for (std::size_t i = 1; i <= n; ++i)
                for (std::size_t j = 0; j < i; ++j)
                    w(i, j) = scale * (std::pow(static_cast<double>(i - j) * dt, p) -
                                       std::pow(static_cast<double>(i - j - 1) * dt, p));
            break;
        }
        case KernelFamily::custom: {
            require(spec.custom_steps() == n && std::abs(spec.T - grid.horizon()) <= 1e-12 * spec.T,
                    "custom kernel grid does not match the path grid");
            for (std::size_t i = 1; i <= n; ++i)
                for (std::size_t j = 0; j < i; ++j)
                    w(i, j) = spec.custom(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) * dt;
            break;
        }
        case KernelFamily::fbm:
        case KernelFamily::fractional_ou: {
            const double H = spec.hurst;
            for (std::size_t i = 1; i <= n; ++i) {
                const double t = grid.node(i);
                for (std::size_t j = 0; j < i; ++j) {
                    const double lo = grid.node(j);
                    const double hi = grid.node(j + 1);
                    if (j + 1 == i) {
                        // Diagonal interval, integrate in the lag.
                        w(i, j) = integrate_singular([&](double v) { return mg_kernel(H, t, t - v, v); }, 0.0, t - lo);
                    } else if (j == 0) {
                        w(i, j) = integrate_singular([&](double s) { return mg_kernel(H, t, s, t - s); }, lo, hi);
                    } else {
                        w(i, j) = integrate_smooth([&](double s) { return mg_kernel(H, t, s, t - s); }, lo, hi);
                    }
                }
            }
            if (spec.family == KernelFamily::fractional_ou) {
                // Subtract a * int_0^{t_i} e^{-a(t_i - r)} fhat_fbm(r) dr, trapezoid over nodes.
                const Eigen::MatrixXd base = weights_;
                for (std::size_t i = 1; i <= n; ++i) {
                    Eigen::RowVectorXd acc = Eigen::RowVectorXd::Zero(static_cast<Eigen::Index>(n));
                    for (std::size_t k = 1; k <= i; ++k) {
                        const double omega = (k == i ? 0.5 : 1.0) * dt;
                        acc += omega * std::exp(-spec.a * (grid.node(i) - grid.node(k))) *
                               base.row(static_cast<Eigen::Index>(k));
                    }
                    weights_.row(static_cast<Eigen::Index>(i)) -= spec.a * acc;
                }
            }
            break;
        }
    }
}

Eigen::VectorXd HatfOperator::apply(const Eigen::VectorXd& fdot) const {
    require(static_cast<std::size_t>(fdot.size()) == grid_.steps(), "control must have one value per interval");
    return weights_ * fdot;
}

Eigen::VectorXd HatfOperator::apply_transpose(const Eigen::VectorXd& g) const {
    require(static_cast<std::size_t>(g.size()) == grid_.steps() + 1, "adjoint input must have one value per node");
    return weights_.transpose() * g;
}

std::vector<double> hatf(const KernelSpec& spec, const std::vector<double>& fdot, const PathGrid& grid) {
    const HatfOperator op(spec, grid);
    const Eigen::VectorXd f = Eigen::Map<const Eigen::VectorXd>(fdot.data(), static_cast<Eigen::Index>(fdot.size()));
    const Eigen::VectorXd out = op.apply(f);
    return {out.data(), out.data() + out.size()};
}

double holder_modulus(const KernelSpec& spec, const PathGrid& grid, double h) {
    spec.validate();
    require(h >= 0.0 && h <= grid.horizon() * (1 + 1e-12), "h must lie in [0,T]");
    const std::size_t n = grid.steps();
    const auto max_gap = static_cast<std::size_t>(std::floor(h / grid.dt() * (1.0 + 1e-12)));
    double best = 0.0;
    for (std::size_t gap = 1; gap <= std::min(max_gap, n); ++gap) {
        for (std::size_t i1 = 0; i1 + gap <= n; ++i1) {
            const double t1 = grid.node(i1);
            const double t2 = grid.node(i1 + gap);
            const double d = t2 - t1;
            // Shared part in the lag u = t1 - s, fresh part in the lag v = t2 - s.
            const double shared = integrate_singular(
                [&](double u) {
                    const double s = t1 - u;
                    const double diff = kernel_lag(spec, t2, s, d + u) - kernel_lag(spec, t1, s, u);
                    return diff * diff;
                },
                0.0, t1);
            const double fresh = integrate_singular(
                [&](double v) {
                    const double k = kernel_lag(spec, t2, t2 - v, v);
                    return k * k;
                },
                0.0, d);
            best = std::max(best, shared + fresh);
        }
    }
    return best;
}

}  // namespace gsv
