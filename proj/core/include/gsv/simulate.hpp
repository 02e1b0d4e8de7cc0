#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "gsv/grid.hpp"
#include "gsv/model.hpp"
#include "gsv/sampling.hpp"

namespace gsv {

struct MCEstimate {
    double mean = 0.0;
    double std_error = 0.0;
    std::size_t count = 0;
    std::uint64_t seed = 0;
    std::size_t hits = 0;  // samples with a nonzero contribution
    std::optional<double> scaled_log;
};

/// Mean and standard error of per-sample values, reduced in index order.
MCEstimate summarize(const std::vector<double>& values, std::uint64_t seed);

struct SimulationOptions {
    SamplingBackend backend = SamplingBackend::kernel;
    /// Brownian-bridge crossing correction between nodes for exit estimates.
    bool bridge = false;
};

/// Left-point Euler scheme for the scaled log-price
///   X_t = -1/2 eps^{2H-2b} int sigma(eps^H Bhat)^2 ds + eps^{H-b} int sigma(eps^H Bhat)(rhobar dW + rho dB).
class LogPriceSimulator {
public:
    struct Workspace {
        GaussianSample sample;
        std::vector<double> x;                    // X at nodes, x[0] = 0
        std::vector<double> sigma;                // sigma(eps^H Bhat) at left points, n values
        std::vector<double> integrated_variance;  // int_0^{t_i} sigma^2 ds at nodes
    };

    LogPriceSimulator(const ModelSpec& model, const ScalingParams& scaling, const PathGrid& grid,
                      SimulationOptions options = {});

    const PathGrid& grid() const noexcept { return sampler_.grid(); }
    const ModelSpec& model() const noexcept { return model_; }
    const ScalingParams& scaling() const noexcept { return scaling_; }
    const SimulationOptions& options() const noexcept { return options_; }
    double martingale_scale() const noexcept { return mart_scale_; }

    /// Fills ws for sample `index`. With a tilt theta (n values) the W increments
    /// get drift theta_j dt and the returned log Girsanov weight is
    /// -sum theta_j dW_j - 1/2 sum theta_j^2 dt (0 without tilt).
    double run(std::uint64_t seed, std::uint64_t index, const std::vector<double>* tilt, Workspace& ws) const;

private:
    ModelSpec model_;
    ScalingParams scaling_;
    SimulationOptions options_;
    GaussianSampler sampler_;
    double vol_scale_;    // eps^H
    double mart_scale_;   // eps^{H-beta}
    double drift_scale_;  // eps^{2H-2beta}
};

/// Evaluates fn(index, workspace) for every sample and summarizes.
MCEstimate monte_carlo(const LogPriceSimulator& sim, std::size_t count, std::uint64_t seed,
                       const std::function<double(std::uint64_t, LogPriceSimulator::Workspace&)>& fn);

struct LogPricePaths {
    Eigen::MatrixXd paths;  // count x (n+1)
    std::vector<double> terminal;
};

LogPricePaths simulate_log_price(const ModelSpec& model, const ScalingParams& scaling, const PathGrid& grid,
                                 std::size_t count, std::uint64_t seed, SimulationOptions options = {});

/// P(X_T >= x eps^alpha), optionally importance sampled by a W drift.
MCEstimate estimate_tail(const ModelSpec& model, const ScalingParams& scaling, double x, const PathGrid& grid,
                         std::size_t count, std::uint64_t seed, const std::vector<double>* tilt = nullptr,
                         SimulationOptions options = {});

/// E[(S_T - exp(x eps^alpha))^+] with S_0 = 1.
MCEstimate estimate_call(const ModelSpec& model, const ScalingParams& scaling, double x, const PathGrid& grid,
                         std::size_t count, std::uint64_t seed, SimulationOptions options = {});

/// Probability that X leaves (a eps^alpha, b eps^alpha) at some node in (0, t].
MCEstimate estimate_exit_prob(const ModelSpec& model, const ScalingParams& scaling, double a, double b, double t,
                              const PathGrid& grid, std::size_t count, std::uint64_t seed,
                              SimulationOptions options = {});

/// Constant W drift that moves the mean of X_T to x eps^alpha for sigma frozen at sigma(0).
std::vector<double> constant_tail_tilt(const ModelSpec& model, const ScalingParams& scaling, double x,
                                       const PathGrid& grid);

/// W drift eps^{alpha+beta-H} ldot from a rate minimizer given on the same grid.
std::vector<double> tilt_from_control(const std::vector<double>& ldot, const ScalingParams& scaling);

}  // namespace gsv
