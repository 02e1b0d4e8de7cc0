#include "gsv/growth.hpp"

#include <algorithm>
#include <cmath>

#include "gsv/error.hpp"
#include "gsv/random.hpp"

namespace gsv {

std::string to_string(GrowthClass cls) {
    switch (cls) {
        case GrowthClass::linear: return "LINEAR";
        case GrowthClass::faster_than_linear: return "FASTER_THAN_LINEAR";
        case GrowthClass::convex_minorant: return "CONVEX_MINORANT";
    }
    return "unknown";
}

namespace {

GrowthWitness linear(double c1, double c2, std::string note) {
    GrowthWitness w;
    w.cls = GrowthClass::linear;
    w.c1 = c1;
    w.c2 = c2;
    w.note = std::move(note);
    return w;
}

// Midpoint convexity and monotonicity of sigma_tilde on sampled triples beyond x3.
bool looks_convex(const std::function<double(double)>& f, double x3) {
    RandomStream rng(99, 0, RandomStream::Purpose::restart);
    for (int k = 0; k < 1000; ++k) {
        const double a = x3 * (0.5 + 3.0 * rng.uniform());
        const double b = x3 * (0.5 + 3.0 * rng.uniform());
        const double lhs = f(0.5 * (a + b));
        const double rhs = 0.5 * (f(a) + f(b));
        if (lhs > rhs * (1.0 + 1e-12) + 1e-300) return false;
        if (std::min(a, b) >= x3 && f(std::max(a, b)) < f(std::min(a, b))) return false;
    }
    return true;
}

}  // namespace

GrowthWitness growth_class(const VolFunction& sigma, const std::optional<GrowthWitness>& declared) {
    switch (sigma.family()) {
        case VolFamily::constant: {
            const double s2 = sigma.c0() * sigma.c0();
            return linear(s2, s2, "constant");
        }
        case VolFamily::affine:
            return linear(2.0 * sigma.c0() * sigma.c0(), 2.0 * std::max(sigma.c1() * sigma.c1(), 1e-300),
                          "(c0 + c1 x)^2 <= 2 c0^2 + 2 c1^2 x^2");
        case VolFamily::bounded_smooth: {
            const double m = sigma.c0() * (1.0 + std::abs(sigma.c1()));
            return linear(m * m, m * m, "bounded by c0 (1 + |c1|)");
        }
        case VolFamily::exponential: {
            if (sigma.c1() <= 0.0) {
                const double c2 = sigma.c0() * sigma.c0();
                return linear(c2, c2, "nonincreasing on [0, inf)");
            }
            const double c = sigma.c0();
            const double lambda = sigma.c1();
            GrowthWitness w;
            w.cls = GrowthClass::faster_than_linear;
            w.x1 = std::max(1.0 / lambda, 1e-12);
            w.g = [c, lambda](double x) { return c * std::exp(lambda * x) / (2.0 * x); };
            w.note = "g(x) = c exp(lambda x) / (2x)";
            return w;
        }
        case VolFamily::poly_plus: {
            const double c = sigma.c0();
            const int k = sigma.power();
            GrowthWitness w;
            w.cls = GrowthClass::faster_than_linear;
            w.x1 = 2.0;
            w.g = [c, k](double x) { return c * std::pow(x, k - 1) / 2.0; };
            w.note = "g(x) = c x^(k-1) / 2";
            return w;
        }
        case VolFamily::custom:
            if (declared) return *declared;
            fail(ErrorCode::unclassified, "custom volatility needs a declared growth witness");
    }
    fail(ErrorCode::unclassified, "unknown volatility family");
}

GrowthWitness convex_minorant(const VolFunction& sigma, const std::optional<GrowthWitness>& declared) {
    GrowthWitness base = growth_class(sigma, declared);
    if (base.cls == GrowthClass::convex_minorant) return base;
    if (base.cls != GrowthClass::faster_than_linear || !base.g)
        fail(ErrorCode::witness_not_smooth, "convex minorant needs a faster-than-linear witness");
    const auto g = base.g;
    const double x3 = base.x1;
    const auto hat = [g](double x) {
        const double gx = g(x);
        return x * x * gx * gx;
    };
    const double floor_value = hat(x3);
    GrowthWitness w;
    w.cls = GrowthClass::convex_minorant;
    w.x1 = base.x1;
    w.g = g;
    w.x3 = x3;
    w.offset = floor_value;
    w.sigma_tilde = [hat, x3, floor_value](double x) { return x >= x3 ? hat(x) : floor_value; };
    w.note = "x^2 g(x)^2 beyond x3, constant below";
    if (!looks_convex(w.sigma_tilde, x3))
        fail(ErrorCode::witness_not_smooth, "minorant failed the midpoint convexity check");
    return w;
}

GrowthWitness linear_minorant(const VolFunction& sigma) {
    if (sigma.family() != VolFamily::affine || sigma.c1() <= 0.0)
        fail(ErrorCode::witness_not_smooth, "linear minorant needs an affine volatility with c1 > 0");
    const double c = sigma.c1();
    GrowthWitness w;
    w.cls = GrowthClass::convex_minorant;
    w.x3 = 1.0;
    w.offset = 0.0;
    w.sigma_tilde = [c](double x) { return x > 0.0 ? c * c * x * x : 0.0; };
    w.note = "linear growth witness c1^2 x^2";
    return w;
}

}  // namespace gsv
