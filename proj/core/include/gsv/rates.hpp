#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "gsv/grid.hpp"
#include "gsv/model.hpp"

namespace gsv {

struct SolverOptions {
    /// Ritz levels; the finest one is the quadrature grid and all must divide it.
    std::vector<std::size_t> levels{16, 32, 64, 128};
    std::size_t restarts = 8;
    std::uint64_t seed = 7;
    int max_iter = 500;
    double gtol = 1e-9;
};

/// Step controls fdot (driving BM) and ldot (independent BM) on a grid.
struct ControlPath {
    PathGrid grid{1, 1.0};
    std::vector<double> fdot;
    std::vector<double> ldot;

    double energy() const;  // 1/2 sum fdot^2 dt
};

enum class RateStatus { converged, max_iter, infeasible };

std::string to_string(RateStatus status);

struct GridLevel {
    std::size_t n = 0;
    double value = 0.0;
};

struct RateResult {
    double value = 0.0;
    ControlPath minimizer;
    std::size_t restarts_used = 0;
    std::vector<double> restart_values;
    std::vector<GridLevel> grid_levels;
    RateStatus status = RateStatus::converged;
    int iterations = 0;
    // exit_rate only: the cheapest hitting time and boundary.
    std::optional<double> hit_time;
    std::optional<double> hit_level;
};

/// Discretized terminal functional
///   (x - rho A)^2 / (2 rhobar^2 D) + 1/2 sum fdot^2 dt,
///   A = sum sbar_j fdot_j dt,  D = sum sbar_j^2 dt,  sbar_j = (sigma(fhat_j) + sigma(fhat_{j+1})) / 2.
double terminal_objective(const ModelSpec& model, double x, const PathGrid& grid, const std::vector<double>& fdot);

/// Discretized path functional with the W control eliminated:
///   1/2 sum r_j^2 dt + 1/2 sum fdot^2 dt,  r_j = (gdot_j - rho sbar_j fdot_j) / (rhobar sbar_j).
/// g holds node values on a uniform grid over [0, model.T].
double path_objective(const ModelSpec& model, const std::vector<double>& g, const std::vector<double>& fdot);

RateResult ldp_rate_terminal(const ModelSpec& model, double x, const SolverOptions& options = {});

RateResult ldp_rate_path(const ModelSpec& model, const std::vector<double>& g, const SolverOptions& options = {});

/// inf of the path rate over paths leaving (a, b) by time t: minimum over the
/// boundary c and the hitting node s <= t of the terminal rate on [0, s].
RateResult exit_rate(const ModelSpec& model, double a, double b, double t, const SolverOptions& options = {});

}  // namespace gsv
