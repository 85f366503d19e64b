#pragma once

#include <optional>

#include "src/lattice/path_lattice.hpp"
#include "src/lattice/weighted_norm.hpp"

namespace fbsdde {

enum class StopReason { Tolerance, MaxIterations };

inline const char* to_string(StopReason r) noexcept {
    return r == StopReason::Tolerance ? "tolerance" : "max_iterations";
}

/// One Picard iterate U = (X, Y, Z); X is absent for pure backward problems.
struct Iterate {
    std::optional<PathLattice> x;
    PathLattice y;
    PathLattice z;

    bool operator==(const Iterate&) const = default;
};

/// U^0 = (0, 0, 0). X^0 is zero on the grid but reports `initial_x` before
/// time 0, the forward-state extension convention.
Iterate zero_iterate(const TimeGrid& grid, std::size_t scenarios, bool with_forward,
                     double initial_x);

/// D = E[sup e^{bt}|dX|^2] + E[sup e^{bt}|dY|^2] + E[int e^{bs}|dZ|^2 ds]
/// between two iterates, with the standard error of the scenario mean.
struct IterateDifference {
    double value = 0.0;
    double standard_error = 0.0;
    double sup_abs = 0.0;   ///< max over all nodes of |dX|, |dY|, |dZ|
};

IterateDifference iterate_difference(const Iterate& next, const Iterate& prev,
                                     const WeightedNormConfig& cfg);

}  // namespace fbsdde
