#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "src/lattice/delay_measure.hpp"
#include "src/lattice/time_grid.hpp"

namespace fbsdde {

/// Which process a lattice holds. Determines what a query before time 0
/// returns: forward and backward states stay frozen at their initial value,
/// the control vanishes.
enum class ProcessRole { StateForward, StateBackward, Control };

/// Values of one process on a uniform grid for M scenarios.
///
/// Storage is time-major (all scenarios of t_0, then t_1, ...) because the
/// backward sweep regresses across scenarios at a fixed time index.
class PathLattice {
public:
    using ValueFn = std::function<double(std::size_t scenario, std::size_t time_index)>;

    /// Zero-filled lattice.
    PathLattice(TimeGrid grid, std::size_t scenarios, ProcessRole role,
                double frozen_initial = 0.0);

    /// `values` is time-major with grid.steps()+1 rows of `scenarios`
    /// entries; all entries must be finite.
    PathLattice(TimeGrid grid, std::size_t scenarios, ProcessRole role,
                std::vector<double> values, double frozen_initial);

    static PathLattice from_function(TimeGrid grid, std::size_t scenarios,
                                     ProcessRole role, double frozen_initial,
                                     const ValueFn& fn);

    const TimeGrid& grid() const noexcept { return grid_; }
    std::size_t scenarios() const noexcept { return scenarios_; }
    std::size_t times() const noexcept { return grid_.steps() + 1; }
    ProcessRole role() const noexcept { return role_; }

    /// Value reported for t < 0 by the state roles. Ignored for Control.
    double frozen_initial() const noexcept { return frozen_initial_; }
    void set_frozen_initial(double v) noexcept { frozen_initial_ = v; }

    double operator()(std::size_t m, std::size_t i) const noexcept {
        return values_[i * scenarios_ + m];
    }
    double& operator()(std::size_t m, std::size_t i) noexcept {
        return values_[i * scenarios_ + m];
    }

    /// Value at signed time index `i`: i < 0 follows the role convention,
    /// i > N throws Error(Bounds).
    double value_at(std::size_t m, std::ptrdiff_t i) const;

    /// Same as value_at without the bounds check on `i`; callers guarantee
    /// i <= N.
    double value_or_extension(std::size_t m, std::ptrdiff_t i) const noexcept {
        if (i < 0) return extension_value();
        return values_[static_cast<std::size_t>(i) * scenarios_ + m];
    }

    double extension_value() const noexcept {
        return role_ == ProcessRole::Control ? 0.0 : frozen_initial_;
    }

    std::span<const double> at_time(std::size_t i) const noexcept {
        return {values_.data() + i * scenarios_, scenarios_};
    }
    std::span<double> at_time(std::size_t i) noexcept {
        return {values_.data() + i * scenarios_, scenarios_};
    }

    std::span<const double> data() const noexcept { return values_; }

    bool same_shape(const PathLattice& other) const noexcept {
        return grid_ == other.grid_ && scenarios_ == other.scenarios_;
    }

    /// Throws Error(NonFinite) naming the first offending (scenario, index).
    void require_finite(const char* what) const;

    bool operator==(const PathLattice&) const = default;

private:
    TimeGrid grid_;
    std::size_t scenarios_;
    ProcessRole role_;
    double frozen_initial_;
    std::vector<double> values_;
};

/// Throws Error(GridMismatch) unless both lattices share grid and scenarios.
void require_same_shape(const PathLattice& a, const PathLattice& b, const char* context);

/// Delay-weighted evaluation sum_k w_k * value(t_i + u_k); lookups before
/// time 0 follow the lattice's role convention.
double delay_average(const PathLattice& lattice, const DelayMeasure& alpha,
                     std::size_t scenario, std::size_t time_index);

/// Pre-resolved variant used on hot paths. `time_index` may be any value
/// <= N; no bounds or alignment checks.
inline double delay_average(const PathLattice& lattice, std::span<const ResolvedAtom> atoms,
                            std::size_t scenario, std::ptrdiff_t time_index) noexcept {
    double acc = 0.0;
    for (const auto& a : atoms) {
        acc += a.weight * lattice.value_or_extension(scenario, time_index + a.offset);
    }
    return acc;
}

/// Pointwise a - b on the grid; the result keeps a's role and has frozen
/// value a.frozen - b.frozen.
PathLattice difference(const PathLattice& a, const PathLattice& b);

}  // namespace fbsdde
