#pragma once

#include <cstddef>

namespace gsv {

/// Uniform partition of [0, T] into n steps; nodes t_i = i T / n.
class PathGrid {
public:
    PathGrid(std::size_t steps, double horizon);

    std::size_t steps() const noexcept { return steps_; }
    double horizon() const noexcept { return horizon_; }
    double dt() const noexcept { return horizon_ / static_cast<double>(steps_); }
    double node(std::size_t i) const noexcept {
        return i == steps_ ? horizon_ : horizon_ * static_cast<double>(i) / static_cast<double>(steps_);
    }

    /// Index i with node(i) == t up to rounding; throws if t is not a node.
    std::size_t node_index(double t) const;

    bool operator==(const PathGrid&) const = default;

private:
    std::size_t steps_;
    double horizon_;
};

}  // namespace gsv
