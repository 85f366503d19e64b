#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "src/lattice/time_grid.hpp"

namespace fbsdde {

/// Brownian increments dW_i = W(t_{i+1}) - W(t_i), i = 0..N-1, for M
/// scenarios, with the cumulative path W(t_i), W(0) = 0.
///
/// Both arrays are time-major like PathLattice.
class BrownianLattice {
public:
    /// `increments` time-major, N rows of M entries.
    BrownianLattice(TimeGrid grid, std::size_t scenarios, std::vector<double> increments,
                    std::uint64_t seed = 0);

    const TimeGrid& grid() const noexcept { return grid_; }
    std::size_t scenarios() const noexcept { return scenarios_; }
    std::uint64_t seed() const noexcept { return seed_; }

    double increment(std::size_t m, std::size_t i) const noexcept {
        return increments_[i * scenarios_ + m];
    }
    double value(std::size_t m, std::size_t i) const noexcept { return path_[i * scenarios_ + m]; }

    std::span<const double> increments_at(std::size_t i) const noexcept {
        return {increments_.data() + i * scenarios_, scenarios_};
    }
    std::span<const double> values_at(std::size_t i) const noexcept {
        return {path_.data() + i * scenarios_, scenarios_};
    }
    std::span<const double> increments() const noexcept { return increments_; }

    bool operator==(const BrownianLattice&) const = default;

private:
    TimeGrid grid_;
    std::size_t scenarios_;
    std::uint64_t seed_;
    std::vector<double> increments_;
    std::vector<double> path_;
};

/// Standard normal for (seed, scenario, step) via Philox4x32-10 and
/// Box-Muller. Pure function; the per-scenario substream is keyed by
/// (seed, m).
double standard_normal(std::uint64_t seed, std::uint64_t scenario, std::uint64_t step) noexcept;

/// Increments N(0, dt), deterministic in (seed, M, grid) and independent of
/// `workers`.
BrownianLattice generate_brownian(std::uint64_t seed, std::size_t scenarios, const TimeGrid& grid,
                                  std::size_t workers = 1);

}  // namespace fbsdde
