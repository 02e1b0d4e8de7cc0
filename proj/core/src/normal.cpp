#include "gsv/normal.hpp"

#include <cmath>
#include <numbers>

namespace gsv {

namespace {
constexpr double inv_sqrt2 = 0.70710678118654752440;
}

double normal_pdf(double z) {
    return std::exp(-0.5 * z * z) * (0.5 * std::numbers::inv_sqrtpi * std::numbers::sqrt2);
}

// erfc is accurate to a few ulp in glibc; the complementary form avoids
// 1 - N cancellation for positive arguments.
double normal_cdf(double z) { return 0.5 * std::erfc(-z * inv_sqrt2); }

double normal_sf(double z) { return 0.5 * std::erfc(z * inv_sqrt2); }

double log_normal_sf(double z) {
    if (z < 25.0) return std::log(normal_sf(z));
    // Asymptotic Mills-ratio series; relative error of the truncation is below 1e-16 for z >= 25.
    const double z2 = z * z;
    const double inv = 1.0 / z2;
    const double series = 1.0 - inv * (1.0 - 3.0 * inv * (1.0 - 5.0 * inv * (1.0 - 7.0 * inv)));
    return -0.5 * z2 - std::log(z) - 0.5 * std::log(2.0 * std::numbers::pi) + std::log(series);
}

}  // namespace gsv
