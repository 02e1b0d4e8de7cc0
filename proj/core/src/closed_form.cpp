#include "gsv/closed_form.hpp"

#include <cmath>

#include "gsv/error.hpp"
#include "gsv/normal.hpp"

namespace gsv {

double mdp_rate_terminal(double sigma0, double T, double x) {
    require(sigma0 > 0.0 && T > 0.0, "sigma0 and T must be positive");
    return x * x / (2.0 * T * sigma0 * sigma0);
}

double mdp_rate_path(double sigma0, double T, const std::vector<double>& g) {
    require(sigma0 > 0.0 && T > 0.0, "sigma0 and T must be positive");
    require(g.size() >= 2 && g.front() == 0.0, "path needs at least two nodes and must start at 0");
    const double dt = T / static_cast<double>(g.size() - 1);
    double acc = 0.0;
    for (std::size_t j = 0; j + 1 < g.size(); ++j) {
        const double d = (g[j + 1] - g[j]) / dt;
        acc += d * d * dt;
    }
    return acc / (2.0 * sigma0 * sigma0);
}

double cl_tail(double sigma0, double T, double x) {
    require(sigma0 > 0.0 && T > 0.0, "sigma0 and T must be positive");
    const double v = std::sqrt(T) * sigma0;
    return normal_sf(x / v + 0.5 * v);
}

double bm_drift_max_cdf(double mu, double T, double y) {
    require(T > 0.0 && y > 0.0, "T and y must be positive");
    const double rt = std::sqrt(T);
    const double first = normal_sf((y - mu * T) / rt);
    const double second = std::exp(2.0 * mu * y + log_normal_sf((y + mu * T) / rt));
    return std::min(1.0, first + second);
}

double cl_running_max(double sigma0, double T, double x) {
    require(sigma0 > 0.0 && x > 0.0, "sigma0 and x must be positive");
    return bm_drift_max_cdf(-0.5 * sigma0, T, x / sigma0);
}

SmallTimeScaling small_time_rescale(const KernelSpec& kernel, const ScalingParams& scaling, double t) {
    if (!kernel.self_similar())
        fail(ErrorCode::not_self_similar, "kernel family " + to_string(kernel.family) + " is not self-similar");
    require(t > 0.0 && t <= 1.0, "small time t must lie in (0,1]");
    SmallTimeScaling out{scaling, 0.0, 0.0, 0.0};
    out.scaling.eps = t;
    out.scaling.validate();
    out.price_exponent = scaling.H - scaling.beta - 0.5;
    out.drift_exponent = scaling.H - scaling.beta + 0.5;
    out.native_drift_exponent = 2.0 * scaling.H - 2.0 * scaling.beta;
    return out;
}

}  // namespace gsv
