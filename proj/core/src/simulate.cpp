#include "gsv/simulate.hpp"

#include <algorithm>
#include <cmath>

#include "gsv/error.hpp"
#include "gsv/parallel.hpp"
#include "gsv/random.hpp"

namespace gsv {

MCEstimate summarize(const std::vector<double>& values, std::uint64_t seed) {
    require(!values.empty(), "Monte Carlo estimate needs at least one sample");
    MCEstimate e;
    e.count = values.size();
    e.seed = seed;
    double sum = 0.0;
    for (double v : values) {
        sum += v;
        if (v != 0.0) ++e.hits;
    }
    e.mean = sum / static_cast<double>(values.size());
    if (values.size() > 1) {
        double ss = 0.0;
        for (double v : values) ss += (v - e.mean) * (v - e.mean);
        e.std_error = std::sqrt(ss / static_cast<double>(values.size() - 1) / static_cast<double>(values.size()));
    }
    return e;
}

LogPriceSimulator::LogPriceSimulator(const ModelSpec& model, const ScalingParams& scaling, const PathGrid& grid,
                                     SimulationOptions options)
    : model_(model), scaling_(scaling), options_(options), sampler_(model.kernel, grid, options.backend) {
    model.validate();
    scaling.validate();
    require(std::abs(grid.horizon() - model.T) <= 1e-12 * model.T, "grid horizon must equal the model horizon");
    if (options.backend == SamplingBackend::covariance && model.rho != 0.0)
        fail(ErrorCode::unsupported_kernel, "covariance backend has no joint law with B; it needs rho = 0");
    vol_scale_ = scaling.eps_pow(scaling.H);
    mart_scale_ = scaling.eps_pow(scaling.H - scaling.beta);
    drift_scale_ = scaling.eps_pow(2.0 * scaling.H - 2.0 * scaling.beta);
}

double LogPriceSimulator::run(std::uint64_t seed, std::uint64_t index, const std::vector<double>* tilt,
                              Workspace& ws) const {
    sampler_.draw(seed, index, ws.sample);
    const std::size_t n = grid().steps();
    const double dt = grid().dt();
    const double rho = model_.rho;
    const double rho_bar = model_.rho_bar();
    ws.x.assign(n + 1, 0.0);
    ws.sigma.resize(n);
    ws.integrated_variance.assign(n + 1, 0.0);

    double log_weight = 0.0;
    if (tilt) {
        require(tilt->size() == n, "tilt must have one value per interval");
        for (std::size_t j = 0; j < n; ++j) {
            const double theta = (*tilt)[j];
            log_weight -= theta * ws.sample.w_increments[j] + 0.5 * theta * theta * dt;
        }
    }

    double x = 0.0;
    double iv = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
        const double s = model_.sigma.value(vol_scale_ * ws.sample.vol_path[j]);
        ws.sigma[j] = s;
        double dw = ws.sample.w_increments[j];
        if (tilt) dw += (*tilt)[j] * dt;
        x += -0.5 * drift_scale_ * s * s * dt + mart_scale_ * s * (rho_bar * dw + rho * ws.sample.b_increments[j]);
        iv += s * s * dt;
        ws.x[j + 1] = x;
        ws.integrated_variance[j + 1] = iv;
    }
    return log_weight;
}

MCEstimate monte_carlo(const LogPriceSimulator& sim, std::size_t count, std::uint64_t seed,
                       const std::function<double(std::uint64_t, LogPriceSimulator::Workspace&)>& fn) {
    require(count >= 1, "sample count must be positive");
    std::vector<double> values(count);
    parallel_for(count, [&](std::size_t begin, std::size_t end) {
        LogPriceSimulator::Workspace ws;
        for (std::size_t k = begin; k < end; ++k) values[k] = fn(k, ws);
    });
    return summarize(values, seed);
}

LogPricePaths simulate_log_price(const ModelSpec& model, const ScalingParams& scaling, const PathGrid& grid,
                                 std::size_t count, std::uint64_t seed, SimulationOptions options) {
    require(count >= 1, "sample count must be positive");
    const LogPriceSimulator sim(model, scaling, grid, options);
    const std::size_t n = grid.steps();
    LogPricePaths out;
    out.paths.resize(static_cast<Eigen::Index>(count), static_cast<Eigen::Index>(n + 1));
    out.terminal.resize(count);
    parallel_for(count, [&](std::size_t begin, std::size_t end) {
        LogPriceSimulator::Workspace ws;
        for (std::size_t k = begin; k < end; ++k) {
            sim.run(seed, k, nullptr, ws);
            for (std::size_t i = 0; i <= n; ++i)
                out.paths(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(i)) = ws.x[i];
            out.terminal[k] = ws.x[n];
        }
    });
    return out;
}

namespace {

void attach_scaled_log(MCEstimate& e, const ScalingParams& scaling) {
    if (e.mean > 0.0) e.scaled_log = scaling.eps_pow(scaling.speed_exponent()) * std::log(e.mean);
}

}  // namespace

MCEstimate estimate_tail(const ModelSpec& model, const ScalingParams& scaling, double x, const PathGrid& grid,
                         std::size_t count, std::uint64_t seed, const std::vector<double>* tilt,
                         SimulationOptions options) {
    require(x > 0.0, "tail level x must be positive");
    const LogPriceSimulator sim(model, scaling, grid, options);
    const double level = x * scaling.eps_pow(scaling.alpha);
    const std::size_t n = grid.steps();
    MCEstimate e = monte_carlo(sim, count, seed, [&](std::uint64_t k, LogPriceSimulator::Workspace& ws) {
        const double lw = sim.run(seed, k, tilt, ws);
        return ws.x[n] >= level ? std::exp(lw) : 0.0;
    });
    if (e.hits == 0 && !tilt)
        fail(ErrorCode::degenerate_estimate, "no sample reached the tail level; supply a tilt");
    attach_scaled_log(e, scaling);
    return e;
}

MCEstimate estimate_call(const ModelSpec& model, const ScalingParams& scaling, double x, const PathGrid& grid,
                         std::size_t count, std::uint64_t seed, SimulationOptions options) {
    require(x > 0.0, "log-strike coefficient x must be positive");
    const LogPriceSimulator sim(model, scaling, grid, options);
    const double strike = std::exp(x * scaling.eps_pow(scaling.alpha));
    const std::size_t n = grid.steps();
    MCEstimate e = monte_carlo(sim, count, seed, [&](std::uint64_t k, LogPriceSimulator::Workspace& ws) {
        sim.run(seed, k, nullptr, ws);
        return std::max(std::exp(ws.x[n]) - strike, 0.0);
    });
    attach_scaled_log(e, scaling);
    return e;
}

MCEstimate estimate_exit_prob(const ModelSpec& model, const ScalingParams& scaling, double a, double b, double t,
                              const PathGrid& grid, std::size_t count, std::uint64_t seed,
                              SimulationOptions options) {
    require(a < 0.0 && b > 0.0, "exit interval must contain 0");
    require(t > 0.0 && t <= grid.horizon() * (1.0 + 1e-12), "exit time must lie in (0,T]");
    const LogPriceSimulator sim(model, scaling, grid, options);
    const auto last = static_cast<std::size_t>(std::floor(t / grid.dt() * (1.0 + 1e-12)));
    const double dt = grid.dt();
    const double mart = sim.martingale_scale();
    const double scale = scaling.eps_pow(scaling.alpha);
    a *= scale;
    b *= scale;
    MCEstimate e = monte_carlo(sim, count, seed, [&](std::uint64_t k, LogPriceSimulator::Workspace& ws) {
        sim.run(seed, k, nullptr, ws);
        for (std::size_t i = 1; i <= last; ++i)
            if (ws.x[i] >= b || ws.x[i] <= a) return 1.0;
        if (options.bridge) {
            // Crossing between nodes for a Brownian bridge with the frozen local volatility.
            RandomStream u(seed, k, RandomStream::Purpose::bridge);
            for (std::size_t j = 0; j < last; ++j) {
                const double s = mart * ws.sigma[j];
                const double var = s * s * dt;
                if (var <= 0.0) continue;
                const double up = std::exp(-2.0 * (b - ws.x[j]) * (b - ws.x[j + 1]) / var);
                const double down = std::exp(-2.0 * (ws.x[j] - a) * (ws.x[j + 1] - a) / var);
                const double p = up + down - up * down;
                if (u.uniform() < p) return 1.0;
            }
        }
        return 0.0;
    });
    attach_scaled_log(e, scaling);
    return e;
}

std::vector<double> constant_tail_tilt(const ModelSpec& model, const ScalingParams& scaling, double x,
                                       const PathGrid& grid) {
    const double rho_bar = model.rho_bar();
    if (rho_bar <= 0.0) fail(ErrorCode::degenerate_correlation, "W tilt needs |rho| < 1");
    const double s0 = model.sigma.sigma0();
    const double T = model.T;
    const double target = x * scaling.eps_pow(scaling.alpha) +
                          0.5 * scaling.eps_pow(2.0 * scaling.H - 2.0 * scaling.beta) * s0 * s0 * T;
    const double theta = target / (scaling.eps_pow(scaling.H - scaling.beta) * s0 * rho_bar * T);
    return std::vector<double>(grid.steps(), theta);
}

std::vector<double> tilt_from_control(const std::vector<double>& ldot, const ScalingParams& scaling) {
    const double scale = scaling.eps_pow(scaling.alpha + scaling.beta - scaling.H);
    std::vector<double> out(ldot.size());
    std::transform(ldot.begin(), ldot.end(), out.begin(), [&](double v) { return scale * v; });
    return out;
}

}  // namespace gsv
