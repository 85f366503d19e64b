#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "src/lattice/iterate.hpp"
#include "src/mc/brownian.hpp"
#include "src/problem/problem_spec.hpp"

namespace fbsdde {

inline constexpr std::size_t kDefaultTreeCap = 12;

/// Non-recombining binary tree: all 2^N sign paths, dW_i = +-sqrt(dt) with
/// probability 1/2 each.
///
/// Path m takes the up move at step i iff bit i of m is set, so the nodes
/// at time t_i are the classes of paths sharing their low i bits and
/// E[. | F_{t_i}] is the average over the pair {m, m ^ (1 << i)}.
class BinomialTree {
public:
    /// Throws Error(OracleCap) when N exceeds `cap`.
    explicit BinomialTree(TimeGrid grid, std::size_t cap = kDefaultTreeCap);

    const TimeGrid& grid() const noexcept { return grid_; }
    std::size_t paths() const noexcept { return std::size_t{1} << grid_.steps(); }

    double increment(std::size_t path, std::size_t i) const noexcept {
        return ((path >> i) & 1U) ? step_ : -step_;
    }

    /// Tree paths as a Brownian lattice with M = 2^N scenarios.
    BrownianLattice brownian() const;

    /// E[v(t_{i+1}) | F_{t_i}] for a column of values at t_{i+1}, returned
    /// per path (constant on each node).
    std::vector<double> conditional_expectation(std::span<const double> next, std::size_t i) const;

private:
    TimeGrid grid_;
    double step_;
};

struct TreeOptions {
    std::size_t max_picard = 200;
    double tolerance = 1e-12;          ///< on the sup-over-nodes change of (X, Y, Z)
    std::optional<double> beta;        ///< weight for D_n; default 1/T
};

struct TreeSolution {
    std::optional<PathLattice> x;
    PathLattice y;
    PathLattice z;
    std::vector<double> iteration_diffs;   ///< exact D_n, n = 1, 2, ...
    std::vector<double> sup_diffs;
    std::vector<double> contraction_ratios;  ///< D_{n+1} / D_n
    StopReason stop_reason = StopReason::MaxIterations;

    std::size_t iterations() const noexcept { return iteration_diffs.size(); }
    double y0() const { return y(0, 0); }
};

/// Picard iteration with exact conditional expectations on the tree:
///   X^n(t_{i+1}) = X^n(t_i) + b(U^{n-1}) dt + sigma(U^{n-1}) dW_i
///   Y^n(t_i)     = E[Y^n(t_{i+1}) | F_{t_i}] + f(U^{n-1}) dt
///   G^n(t_i)     = E[Y^n(t_{i+1}) dW_i | F_{t_i}] / dt
///   Z^n(t_i)     = G^n(t_i) - g(t_i, X^n, Y^n)
/// G is the full integrand of dW, so the non-homogeneous equation is solved
/// directly without the transform/map-back route.
TreeSolution tree_solve(const ProblemSpec& spec, const BinomialTree& tree,
                        const TreeOptions& options = {});

}  // namespace fbsdde
