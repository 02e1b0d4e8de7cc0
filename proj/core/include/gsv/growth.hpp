#pragma once

#include <functional>
#include <optional>
#include <string>

#include "gsv/volatility.hpp"

namespace gsv {

enum class GrowthClass { linear, faster_than_linear, convex_minorant };

std::string to_string(GrowthClass cls);

/// Growth certificate for sigma on [0, inf).
///   linear:             sigma(x)^2 <= c1 + c2 x^2
///   faster_than_linear: sigma(x) >= x g(x) for x > x1, g increasing to infinity
///   convex_minorant:    sigma(x)^2 >= sigma_tilde(x) - offset, sigma_tilde convex,
///                       equal to x^2 g(x)^2 for x >= x3 and constant below
struct GrowthWitness {
    GrowthClass cls = GrowthClass::linear;
    double c1 = 0.0;
    double c2 = 0.0;
    double x1 = 0.0;
    std::function<double(double)> g;
    double x3 = 0.0;
    std::function<double(double)> sigma_tilde;
    double offset = 0.0;
    std::string note;
};

/// Analytic class of a built-in family. CUSTOM needs a declared witness.
GrowthWitness growth_class(const VolFunction& sigma, const std::optional<GrowthWitness>& declared = std::nullopt);

/// Convex minorant built from a faster-than-linear witness; WITNESS_NOT_SMOOTH otherwise.
GrowthWitness convex_minorant(const VolFunction& sigma,
                              const std::optional<GrowthWitness>& declared = std::nullopt);

/// sigma_tilde(x) = c1_aff^2 x^2 for x >= 0, 0 below, valid for AFFINE sigma with c1_aff > 0.
/// Lets the certificate search run on a linear-growth function.
GrowthWitness linear_minorant(const VolFunction& sigma);

}  // namespace gsv
