#include "src/lattice/time_grid.hpp"

#include <cmath>
#include <string>

#include "src/support/error.hpp"

namespace fbsdde {

TimeGrid::TimeGrid(double horizon, std::size_t steps)
    : horizon_(horizon), steps_(steps), dt_(0.0) {
    if (!(horizon > 0.0) || !std::isfinite(horizon)) {
        throw Error(ErrorCode::InvalidArgument,
                    "time grid horizon must be a positive finite number, got " +
                        std::to_string(horizon));
    }
    if (steps == 0) {
        throw Error(ErrorCode::InvalidArgument, "time grid needs at least one step");
    }
    dt_ = horizon / static_cast<double>(steps);
}

}  // namespace fbsdde
