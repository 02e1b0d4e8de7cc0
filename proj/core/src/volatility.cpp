#include "gsv/volatility.hpp"

#include <cmath>
#include <cstdio>
#include <limits>

#include "gsv/error.hpp"

namespace gsv {

std::string to_string(VolFamily family) {
    switch (family) {
        case VolFamily::constant: return "constant";
        case VolFamily::affine: return "affine";
        case VolFamily::exponential: return "exp";
        case VolFamily::poly_plus: return "poly_plus";
        case VolFamily::bounded_smooth: return "bounded_smooth";
        case VolFamily::custom: return "custom";
    }
    return "unknown";
}

VolFunction VolFunction::constant(double sigma0) {
    require(std::isfinite(sigma0) && sigma0 > 0.0, "constant volatility must be positive");
    VolFunction f;
    f.family_ = VolFamily::constant;
    f.c0_ = sigma0;
    return f;
}

VolFunction VolFunction::affine(double c0, double c1) {
    require(std::isfinite(c0) && c0 > 0.0, "affine volatility needs c0 > 0");
    require(std::isfinite(c1) && c1 >= 0.0, "affine volatility needs c1 >= 0");
    VolFunction f;
    f.family_ = VolFamily::affine;
    f.c0_ = c0;
    f.c1_ = c1;
    return f;
}

VolFunction VolFunction::exponential(double c, double lambda) {
    require(std::isfinite(c) && c > 0.0, "exponential volatility needs c > 0");
    require(std::isfinite(lambda), "exponential volatility needs a finite rate");
    VolFunction f;
    f.family_ = VolFamily::exponential;
    f.c0_ = c;
    f.c1_ = lambda;
    return f;
}

VolFunction VolFunction::poly_plus(double c, int k) {
    require(std::isfinite(c) && c > 0.0, "poly_plus volatility needs c > 0");
    require(k >= 2 && k % 2 == 0, "poly_plus volatility needs an even power k >= 2");
    VolFunction f;
    f.family_ = VolFamily::poly_plus;
    f.c0_ = c;
    f.k_ = k;
    return f;
}

VolFunction VolFunction::bounded_smooth(double c0, double c1) {
    require(std::isfinite(c0) && c0 > 0.0, "bounded_smooth volatility needs c0 > 0");
    require(std::isfinite(c1) && std::abs(c1) < 1.0, "bounded_smooth volatility needs |c1| < 1");
    VolFunction f;
    f.family_ = VolFamily::bounded_smooth;
    f.c0_ = c0;
    f.c1_ = c1;
    return f;
}

VolFunction VolFunction::custom(std::function<double(double)> value, std::function<double(double)> derivative,
                                std::function<double(double)> local_constant) {
    require(static_cast<bool>(value), "custom volatility needs a value function");
    VolFunction f;
    f.family_ = VolFamily::custom;
    f.value_ = std::move(value);
    f.derivative_ = std::move(derivative);
    f.local_constant_ = std::move(local_constant);
    require(f.value_(0.0) > 0.0, "custom volatility must be positive at 0");
    return f;
}

double VolFunction::value(double x) const {
    switch (family_) {
        case VolFamily::constant: return c0_;
        case VolFamily::affine: return c0_ + c1_ * std::abs(x);
        case VolFamily::exponential: return c0_ * std::exp(c1_ * x);
        case VolFamily::poly_plus: return c0_ * (1.0 + std::pow(x, k_));
        case VolFamily::bounded_smooth: return c0_ * (1.0 + c1_ * std::tanh(x));
        case VolFamily::custom: return value_(x);
    }
    return 0.0;
}

double VolFunction::derivative(double x) const {
    switch (family_) {
        case VolFamily::constant: return 0.0;
        case VolFamily::affine: return x > 0.0 ? c1_ : (x < 0.0 ? -c1_ : 0.0);
        case VolFamily::exponential: return c0_ * c1_ * std::exp(c1_ * x);
        case VolFamily::poly_plus: return c0_ * k_ * std::pow(x, k_ - 1);
        case VolFamily::bounded_smooth: {
            const double c = std::cosh(x);
            return c0_ * c1_ / (c * c);
        }
        case VolFamily::custom: {
            if (derivative_) return derivative_(x);
            const double h = 1e-6 * std::max(1.0, std::abs(x));
            return (value_(x + h) - value_(x - h)) / (2.0 * h);
        }
    }
    return 0.0;
}

double VolFunction::local_constant(double delta) const {
    require(delta >= 0.0, "delta must be nonnegative");
    switch (family_) {
        case VolFamily::constant: return 0.0;
        case VolFamily::affine: return c1_;
        case VolFamily::exponential: return c0_ * std::abs(c1_) * std::exp(std::abs(c1_) * delta);
        case VolFamily::poly_plus: return c0_ * k_ * std::pow(delta, k_ - 1);
        case VolFamily::bounded_smooth: return c0_ * std::abs(c1_);
        case VolFamily::custom:
            return local_constant_ ? local_constant_(delta) : std::numeric_limits<double>::quiet_NaN();
    }
    return 0.0;
}

bool VolFunction::is_even() const noexcept {
    switch (family_) {
        case VolFamily::constant:
        case VolFamily::affine:
        case VolFamily::poly_plus: return true;
        case VolFamily::exponential: return c1_ == 0.0;
        case VolFamily::bounded_smooth: return c1_ == 0.0;
        case VolFamily::custom: return false;
    }
    return false;
}

std::string VolFunction::describe() const {
    char buf[128];
    switch (family_) {
        case VolFamily::constant: std::snprintf(buf, sizeof buf, "constant(%.6g)", c0_); break;
        case VolFamily::affine: std::snprintf(buf, sizeof buf, "affine(%.6g,%.6g)", c0_, c1_); break;
        case VolFamily::exponential: std::snprintf(buf, sizeof buf, "exp(%.6g,%.6g)", c0_, c1_); break;
        case VolFamily::poly_plus: std::snprintf(buf, sizeof buf, "poly_plus(%.6g,%d)", c0_, k_); break;
        case VolFamily::bounded_smooth: std::snprintf(buf, sizeof buf, "bounded_smooth(%.6g,%.6g)", c0_, c1_); break;
        case VolFamily::custom: std::snprintf(buf, sizeof buf, "custom"); break;
    }
    return buf;
}

}  // namespace gsv
