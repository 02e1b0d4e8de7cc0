#pragma once

// Reference computations used by the tests. They avoid the library on purpose.

#include <cmath>
#include <functional>
#include <numeric>
#include <vector>

namespace oracle {

inline double nbar(double z) { return 0.5 * std::erfc(z / std::sqrt(2.0)); }
inline double ncdf(double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); }

// Composite Simpson on [a, b] with m (even) panels.
inline double simpson(const std::function<double(double)>& f, double a, double b, int m = 2000) {
    if (m % 2) ++m;
    const double h = (b - a) / m;
    double s = f(a) + f(b);
    for (int i = 1; i < m; ++i) s += (i % 2 ? 4.0 : 2.0) * f(a + i * h);
    return s * h / 3.0;
}

// int_a^b f(s) (b - s)^p ds for p > -1 with f smooth: substitute u = (b-s)^{p+1}.
inline double singular_right(const std::function<double(double)>& f, double a, double b, double p, int m = 4000) {
    const double q = p + 1.0;
    const double top = std::pow(b - a, q);
    return simpson([&](double u) { return f(b - std::pow(u, 1.0 / q)) / q; }, 0.0, top, m);
}

// Simpson after the map s = a + (b-a) w^m / (w^m + (1-w)^m), which flattens
// integrable power singularities at both ends.
inline double smoothed(const std::function<double(double)>& f, double a, double b, int m = 4000, int power = 8) {
    auto g = [&](double w) {
        if (w <= 0.0 || w >= 1.0) return 0.0;
        const double p = std::pow(w, power), q = std::pow(1.0 - w, power);
        const double psi = p / (p + q);
        const double dpsi = power * std::pow(w, power - 1) * std::pow(1.0 - w, power - 1) / ((p + q) * (p + q));
        // measure from the nearer end so the singular endpoint is not hit by rounding
        const double u = psi < 0.5 ? a + (b - a) * psi : b - (b - a) * q / (p + q);
        const double v = f(u) * (b - a) * dpsi;
        return std::isfinite(v) ? v : 0.0;
    };
    return simpson(g, 0.0, 1.0, m);
}

inline double bs_call(double k, double nu) {
    return ncdf(-k / nu + nu / 2) - std::exp(k) * ncdf(-k / nu - nu / 2);
}

struct Moments {
    double mean = 0.0;
    double var = 0.0;
    double se = 0.0;
};

inline Moments moments(const std::vector<double>& v) {
    Moments m;
    const double n = static_cast<double>(v.size());
    m.mean = std::accumulate(v.begin(), v.end(), 0.0) / n;
    double ss = 0.0;
    for (double x : v) ss += (x - m.mean) * (x - m.mean);
    m.var = ss / (n - 1.0);
    m.se = std::sqrt(m.var / n);
    return m;
}

}  // namespace oracle
