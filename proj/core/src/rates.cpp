#include "gsv/rates.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "gsv/bfgs.hpp"
#include "gsv/error.hpp"
#include "gsv/kernels.hpp"
#include "gsv/random.hpp"

namespace gsv {

namespace {

using Eigen::Index;
using Eigen::VectorXd;

// Objective on fine step controls. Either a terminal target or a path slope vector.
struct Functional {
    const Eigen::MatrixXd* W = nullptr;  // (N+1) x N hatf weights
    double h = 0.0;
    const VolFunction* sigma = nullptr;
    double rho = 0.0;
    double rho_bar = 1.0;
    bool terminal = true;
    double x = 0.0;
    VectorXd gdot;

    Index size() const { return W->cols(); }

    double evaluate(const VectorXd& f, VectorXd* grad, VectorXd* ldot = nullptr) const {
        const Index N = size();
        const VectorXd fhat = (*W) * f;
        VectorXd sb(N);
        for (Index j = 0; j < N; ++j) sb(j) = 0.5 * (sigma->value(fhat(j)) + sigma->value(fhat(j + 1)));
        const double energy = 0.5 * h * f.squaredNorm();

        VectorXd g_sb;
        double value = 0.0;
        if (grad) grad->resize(N);

        if (terminal) {
            double A = 0.0, D = 0.0;
            for (Index j = 0; j < N; ++j) {
                A += sb(j) * f(j) * h;
                D += sb(j) * sb(j) * h;
            }
            const double num = x - rho * A;
            const double den = 2.0 * rho_bar * rho_bar * D;
            value = num * num / den + energy;
            if (ldot) {
                ldot->resize(N);
                for (Index j = 0; j < N; ++j) (*ldot)(j) = sb(j) * num / (rho_bar * D);
            }
            if (grad) {
                const double FA = -rho * num / (rho_bar * rho_bar * D);
                const double FD = -num * num / (den * D);
                g_sb.resize(N);
                for (Index j = 0; j < N; ++j) {
                    g_sb(j) = FA * f(j) * h + FD * 2.0 * sb(j) * h;
                    (*grad)(j) = FA * sb(j) * h + f(j) * h;
                }
            }
        } else {
            double acc = 0.0;
            VectorXd r(N);
            for (Index j = 0; j < N; ++j) {
                r(j) = (gdot(j) - rho * sb(j) * f(j)) / (rho_bar * sb(j));
                acc += r(j) * r(j);
            }
            value = 0.5 * h * acc + energy;
            if (ldot) *ldot = r;
            if (grad) {
                g_sb.resize(N);
                for (Index j = 0; j < N; ++j) {
                    g_sb(j) = -h * r(j) * gdot(j) / (rho_bar * sb(j) * sb(j));
                    (*grad)(j) = -h * r(j) * rho / rho_bar + h * f(j);
                }
            }
        }

        if (grad) {
            VectorXd g_fhat(N + 1);
            for (Index k = 0; k <= N; ++k) {
                double s = 0.0;
                if (k < N) s += g_sb(k);
                if (k >= 1) s += g_sb(k - 1);
                g_fhat(k) = 0.5 * sigma->derivative(fhat(k)) * s;
            }
            *grad += W->transpose() * g_fhat;
        }
        return value;
    }
};

struct Outcome {
    VectorXd fdot;  // fine control
    double value = 0.0;
    std::vector<double> restart_values;
    std::vector<GridLevel> levels;
    bool converged = true;
    int iterations = 0;
};

VectorXd prolong(const VectorXd& coarse, Index fine) {
    const Index block = fine / coarse.size();
    VectorXd out(fine);
    for (Index j = 0; j < fine; ++j) out(j) = coarse(j / block);
    return out;
}

// Multi-start BFGS at the coarsest level, then the winner is warm-started
// through every finer level. Level values are non-increasing by construction.
Outcome solve_multilevel(const Functional& fn, double T, std::vector<std::size_t> levels, double scale,
                         const SolverOptions& opts) {
    const Index N = fn.size();
    std::sort(levels.begin(), levels.end());
    levels.erase(std::unique(levels.begin(), levels.end()), levels.end());
    for (std::size_t n : levels)
        require(n >= 1 && static_cast<Index>(n) <= N && N % static_cast<Index>(n) == 0,
                "every solver level must divide the finest level");
    if (levels.empty() || static_cast<Index>(levels.back()) != N) levels.push_back(static_cast<std::size_t>(N));

    BfgsOptions bopts;
    bopts.max_iter = opts.max_iter;
    bopts.gtol = opts.gtol;

    auto level_objective = [&](Index n) {
        const double hn = T / static_cast<double>(n);
        const double root = std::sqrt(hn);
        const Index block = N / n;
        return [&fn, n, root, block, N](const VectorXd& u, VectorXd* grad) {
            const VectorXd f = prolong(u / root, N);
            if (!grad) return fn.evaluate(f, nullptr);
            VectorXd gf;
            const double v = fn.evaluate(f, &gf);
            grad->setZero(n);
            for (Index j = 0; j < N; ++j) (*grad)(j / block) += gf(j);
            *grad /= root;
            return v;
        };
    };

    Outcome out;
    const Index n0 = static_cast<Index>(levels.front());
    const double root0 = std::sqrt(T / static_cast<double>(n0));
    const Objective obj0 = level_objective(n0);

    const std::size_t restarts = std::max<std::size_t>(opts.restarts, 1);
    VectorXd best_u;
    double best_value = std::numeric_limits<double>::infinity();
    double best_energy = std::numeric_limits<double>::infinity();
    bool best_converged = false;
    for (std::size_t r = 0; r < restarts; ++r) {
        VectorXd u0 = VectorXd::Zero(n0);
        if (r == 1) u0.setConstant(scale * root0);
        else if (r == 2) u0.setConstant(-scale * root0);
        else if (r >= 3) {
            RandomStream rng(opts.seed, r, RandomStream::Purpose::restart);
            for (Index j = 0; j < n0; ++j) u0(j) = scale * root0 * rng.normal();
        }
        const BfgsResult res = bfgs_minimize(obj0, u0, bopts);
        out.restart_values.push_back(res.value);
        out.iterations += res.iterations;
        const double energy = 0.5 * res.x.squaredNorm();
        const bool better = res.value < best_value - 1e-10 ||
                            (std::abs(res.value - best_value) <= 1e-10 && energy < best_energy);
        if (better) {
            best_value = res.value;
            best_energy = energy;
            best_u = res.x;
            best_converged = res.converged;
        }
    }
    out.levels.push_back({static_cast<std::size_t>(n0), best_value});

    VectorXd u = best_u;
    Index n_prev = n0;
    double value = best_value;
    bool converged = best_converged;
    for (std::size_t li = 1; li < levels.size(); ++li) {
        const Index n = static_cast<Index>(levels[li]);
        const VectorXd fdot_prev = u / std::sqrt(T / static_cast<double>(n_prev));
        const VectorXd u0 = prolong(fdot_prev, n) * std::sqrt(T / static_cast<double>(n));
        const BfgsResult res = bfgs_minimize(level_objective(n), u0, bopts);
        out.iterations += res.iterations;
        u = res.x;
        value = res.value;
        converged = res.converged;
        n_prev = n;
        out.levels.push_back({static_cast<std::size_t>(n), value});
    }
    out.fdot = prolong(u / std::sqrt(T / static_cast<double>(n_prev)), N);
    out.value = value;
    out.converged = converged;
    return out;
}

void check_correlation(const ModelSpec& model) {
    if (std::abs(model.rho) >= 1.0)
        fail(ErrorCode::degenerate_correlation, "variational rates divide by rhobar; |rho| = 1 is excluded");
}

std::size_t finest_level(const ModelSpec& model, const SolverOptions& opts) {
    if (model.kernel.family == KernelFamily::custom) return model.kernel.custom_steps();
    require(!opts.levels.empty(), "solver needs at least one grid level");
    return *std::max_element(opts.levels.begin(), opts.levels.end());
}

std::vector<std::size_t> usable_levels(const SolverOptions& opts, std::size_t N) {
    std::vector<std::size_t> out;
    for (std::size_t n : opts.levels)
        if (n >= 1 && n <= N && N % n == 0) out.push_back(n);
    return out;
}

RateResult package(const Outcome& o, const Functional& fn, const PathGrid& grid) {
    RateResult r;
    r.value = std::max(o.value, 0.0);
    r.minimizer.grid = grid;
    r.minimizer.fdot.assign(o.fdot.data(), o.fdot.data() + o.fdot.size());
    VectorXd ldot;
    fn.evaluate(o.fdot, nullptr, &ldot);
    r.minimizer.ldot.assign(ldot.data(), ldot.data() + ldot.size());
    r.restarts_used = o.restart_values.size();
    r.restart_values = o.restart_values;
    r.grid_levels = o.levels;
    r.status = o.converged ? RateStatus::converged : RateStatus::max_iter;
    r.iterations = o.iterations;
    return r;
}

}  // namespace

double ControlPath::energy() const {
    double s = 0.0;
    for (double v : fdot) s += v * v;
    return 0.5 * s * grid.dt();
}

std::string to_string(RateStatus status) {
    switch (status) {
        case RateStatus::converged: return "CONVERGED";
        case RateStatus::max_iter: return "MAX_ITER";
        case RateStatus::infeasible: return "INFEASIBLE";
    }
    return "unknown";
}

double terminal_objective(const ModelSpec& model, double x, const PathGrid& grid, const std::vector<double>& fdot) {
    model.validate();
    check_correlation(model);
    require(fdot.size() == grid.steps(), "control must have one value per interval");
    const HatfOperator op(model.kernel, grid);
    Functional fn;
    fn.W = &op.weights();
    fn.h = grid.dt();
    fn.sigma = &model.sigma;
    fn.rho = model.rho;
    fn.rho_bar = model.rho_bar();
    fn.x = x;
    return fn.evaluate(Eigen::Map<const VectorXd>(fdot.data(), static_cast<Index>(fdot.size())), nullptr);
}

double path_objective(const ModelSpec& model, const std::vector<double>& g, const std::vector<double>& fdot) {
    model.validate();
    check_correlation(model);
    require(g.size() >= 2 && fdot.size() + 1 == g.size(), "path needs n+1 node values and n controls");
    const PathGrid grid(fdot.size(), model.T);
    const HatfOperator op(model.kernel, grid);
    Functional fn;
    fn.W = &op.weights();
    fn.h = grid.dt();
    fn.sigma = &model.sigma;
    fn.rho = model.rho;
    fn.rho_bar = model.rho_bar();
    fn.terminal = false;
    fn.gdot.resize(static_cast<Index>(fdot.size()));
    for (std::size_t j = 0; j < fdot.size(); ++j) fn.gdot(static_cast<Index>(j)) = (g[j + 1] - g[j]) / grid.dt();
    return fn.evaluate(Eigen::Map<const VectorXd>(fdot.data(), static_cast<Index>(fdot.size())), nullptr);
}

RateResult ldp_rate_terminal(const ModelSpec& model, double x, const SolverOptions& options) {
    model.validate();
    check_correlation(model);
    require(std::isfinite(x), "x must be finite");
    const std::size_t N = finest_level(model, options);
    const PathGrid grid(N, model.T);
    const HatfOperator op(model.kernel, grid);
    Functional fn;
    fn.W = &op.weights();
    fn.h = grid.dt();
    fn.sigma = &model.sigma;
    fn.rho = model.rho;
    fn.rho_bar = model.rho_bar();
    fn.x = x;
    const double scale = std::max(std::abs(x), 1e-3) / (model.sigma.sigma0() * model.T);
    const Outcome o = solve_multilevel(fn, model.T, usable_levels(options, N), scale, options);
    return package(o, fn, grid);
}

RateResult ldp_rate_path(const ModelSpec& model, const std::vector<double>& g, const SolverOptions& options) {
    model.validate();
    check_correlation(model);
    require(g.size() >= 2, "path needs at least two nodes");
    require(g.front() == 0.0, "path must start at 0");
    const std::size_t N = g.size() - 1;
    if (model.kernel.family == KernelFamily::custom)
        require(model.kernel.custom_steps() == N, "path grid must match the custom kernel grid");
    const PathGrid grid(N, model.T);
    const HatfOperator op(model.kernel, grid);
    Functional fn;
    fn.W = &op.weights();
    fn.h = grid.dt();
    fn.sigma = &model.sigma;
    fn.rho = model.rho;
    fn.rho_bar = model.rho_bar();
    fn.terminal = false;
    fn.gdot.resize(static_cast<Index>(N));
    double rms = 0.0;
    for (std::size_t j = 0; j < N; ++j) {
        const double d = (g[j + 1] - g[j]) / grid.dt();
        fn.gdot(static_cast<Index>(j)) = d;
        rms += d * d;
    }
    rms = std::sqrt(rms / static_cast<double>(N));
    const double scale = std::max(rms, 1e-3) / model.sigma.sigma0();
    const Outcome o = solve_multilevel(fn, model.T, usable_levels(options, N), scale, options);
    return package(o, fn, grid);
}

RateResult exit_rate(const ModelSpec& model, double a, double b, double t, const SolverOptions& options) {
    model.validate();
    check_correlation(model);
    require(a < 0.0 && b > 0.0, "exit interval must contain 0");
    require(t > 0.0 && t <= model.T * (1.0 + 1e-12), "exit time must lie in (0,T]");

    std::vector<std::size_t> levels = options.levels;
    if (model.kernel.family == KernelFamily::custom) levels = {model.kernel.custom_steps()};
    std::sort(levels.begin(), levels.end());
    levels.erase(std::unique(levels.begin(), levels.end()), levels.end());
    require(!levels.empty() && levels.front() >= 1, "solver needs at least one grid level");

    RateResult best;
    for (std::size_t n : levels) {
        const PathGrid grid(n, model.T);
        const HatfOperator op(model.kernel, grid);
        const auto last = static_cast<std::size_t>(std::floor(t / grid.dt() * (1.0 + 1e-12)));
        require(last >= 1, "exit time is shorter than one grid step at level " + std::to_string(n));

        RateResult level_best;
        level_best.value = std::numeric_limits<double>::infinity();
        for (std::size_t m = 1; m <= last; ++m) {
            const Eigen::MatrixXd W = op.weights().topLeftCorner(static_cast<Index>(m + 1), static_cast<Index>(m));
            const double s = grid.node(m);
            for (double c : {a, b}) {
                Functional fn;
                fn.W = &W;
                fn.h = grid.dt();
                fn.sigma = &model.sigma;
                fn.rho = model.rho;
                fn.rho_bar = model.rho_bar();
                fn.x = c;
                const double scale = std::abs(c) / (model.sigma.sigma0() * s);
                const Outcome o = solve_multilevel(fn, s, {m}, scale, options);
                if (o.value < level_best.value - 1e-12) {
                    level_best = package(o, fn, PathGrid(m, s));
                    level_best.hit_time = s;
                    level_best.hit_level = c;
                }
            }
        }
        best.grid_levels.push_back({n, level_best.value});
        const auto history = best.grid_levels;
        best = level_best;
        best.grid_levels = history;
    }
    return best;
}

}  // namespace gsv
