#include "gsv/grid.hpp"

#include <cmath>
#include <string>

#include "gsv/error.hpp"

namespace gsv {

PathGrid::PathGrid(std::size_t steps, double horizon) : steps_(steps), horizon_(horizon) {
    require(steps >= 1, "grid needs at least one step");
    require(std::isfinite(horizon) && horizon > 0.0, "grid horizon must be positive");
}

std::size_t PathGrid::node_index(double t) const {
    const double position = t / dt();
    const double rounded = std::round(position);
    require(rounded >= 0.0 && rounded <= static_cast<double>(steps_) &&
                std::abs(position - rounded) <= 1e-9 * std::max(1.0, position),
            "time " + std::to_string(t) + " is not a grid node");
    return static_cast<std::size_t>(rounded);
}

}  // namespace gsv
