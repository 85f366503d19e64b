#pragma once

#include <cstddef>

namespace fbsdde {

/// Uniform grid t_i = i * dt on [0, T], i = 0..N.
class TimeGrid {
public:
    TimeGrid(double horizon, std::size_t steps);

    double horizon() const noexcept { return horizon_; }
    std::size_t steps() const noexcept { return steps_; }
    double dt() const noexcept { return dt_; }

    /// Grid point t_i. The last point is returned as T itself so that the
    /// terminal time carries no accumulated rounding.
    double time(std::size_t i) const noexcept {
        return i == steps_ ? horizon_ : static_cast<double>(i) * dt_;
    }

    bool operator==(const TimeGrid&) const = default;

private:
    double horizon_;
    std::size_t steps_;
    double dt_;
};

}  // namespace fbsdde
