#pragma once

#include <functional>
#include <string>

namespace gsv {

enum class VolFamily { constant, affine, exponential, poly_plus, bounded_smooth, custom };

std::string to_string(VolFamily family);

/// Volatility function sigma with a declared local modulus of continuity.
///
/// Every built-in family is locally Lipschitz, so omega(h) = h and
/// local_constant(delta) bounds |sigma'| on [-delta, delta].
///
///   constant        sigma(x) = c0
///   affine          sigma(x) = c0 + c1 |x|
///   exponential     sigma(x) = c0 exp(c1 x)
///   poly_plus       sigma(x) = c0 (1 + x^k), k even
///   bounded_smooth  sigma(x) = c0 (1 + c1 tanh x), |c1| < 1
class VolFunction {
public:
    static VolFunction constant(double sigma0);
    static VolFunction affine(double c0, double c1);
    static VolFunction exponential(double c, double lambda);
    static VolFunction poly_plus(double c, int k);
    static VolFunction bounded_smooth(double c0, double c1);
    /// User function; derivative and modulus constant are optional.
    static VolFunction custom(std::function<double(double)> value, std::function<double(double)> derivative = {},
                              std::function<double(double)> local_constant = {});

    VolFamily family() const noexcept { return family_; }
    double c0() const noexcept { return c0_; }
    double c1() const noexcept { return c1_; }
    int power() const noexcept { return k_; }

    double value(double x) const;
    double derivative(double x) const;
    double operator()(double x) const { return value(x); }
    double sigma0() const { return value(0.0); }

    /// L(delta) with |sigma(x) - sigma(y)| <= L(delta) |x - y| on [-delta, delta].
    double local_constant(double delta) const;

    /// sigma(x) == sigma(-x) for all x.
    bool is_even() const noexcept;

    std::string describe() const;

private:
    VolFamily family_ = VolFamily::constant;
    double c0_ = 1.0;
    double c1_ = 0.0;
    int k_ = 0;
    std::function<double(double)> value_;
    std::function<double(double)> derivative_;
    std::function<double(double)> local_constant_;
};

}  // namespace gsv
