#include "gsv/bfgs.hpp"

#include <cmath>

namespace gsv {

BfgsResult bfgs_minimize(const Objective& f, Eigen::VectorXd x0, const BfgsOptions& options) {
    const auto n = x0.size();
    BfgsResult r;
    r.x = std::move(x0);
    if (n == 0) {
        r.value = f(r.x, nullptr);
        r.converged = true;
        return r;
    }
    Eigen::VectorXd g(n);
    double fx = f(r.x, &g);
    Eigen::MatrixXd hinv = Eigen::MatrixXd::Identity(n, n);
    bool fresh = true;

    auto small = [&](double value, const Eigen::VectorXd& grad) {
        return grad.lpNorm<Eigen::Infinity>() <= options.gtol * (1.0 + std::abs(value));
    };

    int it = 0;
    for (; it < options.max_iter; ++it) {
        if (small(fx, g)) {
            r.converged = true;
            break;
        }
        Eigen::VectorXd dir = -hinv * g;
        double slope = g.dot(dir);
        if (!(slope < 0.0)) {
            hinv.setIdentity();
            fresh = true;
            dir = -g;
            slope = -g.squaredNorm();
        }
        double step = 1.0;
        Eigen::VectorXd xn(n), gn(n);
        double fn = 0.0;
        bool accepted = false;
        for (int k = 0; k < 60; ++k) {
            xn = r.x + step * dir;
            fn = f(xn, &gn);
            if (std::isfinite(fn) && fn <= fx + 1e-4 * step * slope) {
                accepted = true;
                break;
            }
            step *= 0.5;
        }
        if (!accepted) {
            if (!fresh) {
                hinv.setIdentity();
                fresh = true;
                continue;
            }
            // No descent left at machine precision; accept as stationary if the gradient is near zero.
            r.converged = g.lpNorm<Eigen::Infinity>() <= std::sqrt(options.gtol) * (1.0 + std::abs(fx));
            break;
        }
        const Eigen::VectorXd s = xn - r.x;
        const Eigen::VectorXd y = gn - g;
        const double sy = s.dot(y);
        r.x = xn;
        g = gn;
        const bool stalled = std::abs(fx - fn) <= 1e-16 * (1.0 + std::abs(fx));
        fx = fn;
        if (sy > 1e-12 * s.norm() * y.norm() && sy > 0.0) {
            if (fresh) hinv *= sy / y.squaredNorm();
            const double rho = 1.0 / sy;
            const Eigen::VectorXd hy = hinv * y;
            hinv += (rho * rho * y.dot(hy) + rho) * (s * s.transpose()) - rho * (hy * s.transpose() + s * hy.transpose());
            fresh = false;
        }
        if (stalled && small(fx, g * 1e-3)) {
            r.converged = true;
            ++it;
            break;
        }
    }
    r.value = fx;
    r.iterations = it;
    if (!r.converged) r.converged = small(fx, g);
    return r;
}

}  // namespace gsv
