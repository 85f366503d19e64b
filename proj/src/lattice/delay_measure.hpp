#pragma once

#include <cstddef>
#include <vector>

#include "src/lattice/time_grid.hpp"

namespace fbsdde {

/// One point mass of a delay measure: weight `weight` at lag `lag` <= 0.
struct DelayAtom {
    double lag;
    double weight;

    bool operator==(const DelayAtom&) const = default;
};

/// Atom resolved against a concrete grid: lag = -offset * dt.
struct ResolvedAtom {
    std::ptrdiff_t offset;   ///< non-positive index shift
    double weight;
};

/// Probability measure on [-T, 0] with finitely many atoms.
///
/// Weights are positive and sum to one (within 1e-12), lags lie in [-T, 0]
/// and are pairwise distinct. Grid alignment is checked when the measure is
/// resolved against a grid, since the same measure may be used with several
/// step counts (convergence studies).
class DelayMeasure {
public:
    /// Point mass at lag 0: no delay.
    static DelayMeasure dirac(double horizon);
    static DelayMeasure dirac_at(double lag, double horizon);

    DelayMeasure(std::vector<DelayAtom> atoms, double horizon);

    const std::vector<DelayAtom>& atoms() const noexcept { return atoms_; }
    double horizon() const noexcept { return horizon_; }

    /// True for the single atom at lag 0.
    bool is_instantaneous() const noexcept;

    /// Index offsets on `grid`; throws Error(Alignment) if any lag is not an
    /// integer multiple of grid.dt().
    std::vector<ResolvedAtom> resolve(const TimeGrid& grid) const;

    bool operator==(const DelayMeasure&) const = default;

private:
    std::vector<DelayAtom> atoms_;
    double horizon_;
};

}  // namespace fbsdde
