#pragma once

#include <functional>

#include <Eigen/Dense>

namespace gsv {

struct BfgsOptions {
    int max_iter = 500;
    double gtol = 1e-9;  // stop when |grad|_inf <= gtol * (1 + |f|)
};

struct BfgsResult {
    Eigen::VectorXd x;
    double value = 0.0;
    int iterations = 0;
    bool converged = false;
};

/// Objective returns f(x) and, if grad is non-null, writes the gradient.
using Objective = std::function<double(const Eigen::VectorXd& x, Eigen::VectorXd* grad)>;

/// Dense BFGS with Armijo backtracking. The returned value never exceeds f(x0).
BfgsResult bfgs_minimize(const Objective& f, Eigen::VectorXd x0, const BfgsOptions& options = {});

}  // namespace gsv
