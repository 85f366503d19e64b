#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "src/lattice/iterate.hpp"
#include "src/mc/brownian.hpp"
#include "src/problem/transforms.hpp"
#include "src/solver/regression.hpp"

namespace fbsdde {

/// Explicit Euler for the forward line of the Picard scheme:
///   X(t_{i+1}) = X(t_i) + b(t_i, U^{n-1}) dt + sigma(t_i, U^{n-1}) dW_i
/// with both coefficients frozen at the previous iterate `prev`.
PathLattice forward_sweep(const Iterate& prev, const Coefficient& b, const Coefficient& sigma,
                          const BrownianLattice& W, double x, std::size_t workers = 1);

/// Regression design at t_i. Everything in it is F_{t_i}-measurable: W(t_i),
/// X^n(t_i), and optionally delay averages of X^n and Y^{n-1} at t_i taken
/// with the driver's delay atoms.
DesignMatrix backward_design(std::size_t i, const RegressionBasis& basis, const BrownianLattice& W,
                             const PathLattice* current_x, const Iterate& prev,
                             std::span<const ResolvedAtom> driver_atoms);

struct BackwardStepResult {
    std::vector<double> y;
    std::vector<double> z;
    std::vector<double> driver;   ///< f(t_i, U^{n-1}) per scenario
    LinearFit y_fit;
    LinearFit z_fit;
    bool damped = false;
};

/// One backward step at t_i < t_N:
///   Z(t_i) = E[Y(t_{i+1}) dW_i / dt | F_{t_i}]
///   Y(t_i) = E[Y(t_{i+1}) + f(t_i, U^{n-1}) dt | F_{t_i}]
/// Both projections share one design. The Z projection is estimated from
/// (Y(t_{i+1}) - Y(t_i)) dW_i / dt, the same conditional expectation with a
/// much smaller regression variance.
BackwardStepResult backward_step(std::size_t i, std::span<const double> y_next, const Iterate& prev,
                                 const PathLattice* current_x, const BoundCoefficient& f,
                                 const BrownianLattice& W, const RegressionBasis& basis,
                                 std::size_t workers = 1);

struct BackwardSweepResult {
    PathLattice y;
    PathLattice z;
    /// xi + sum_i f(t_i, U^{n-1}) dt per scenario; its mean is Y(0).
    std::vector<double> pathwise_y0;
    std::vector<std::size_t> damped_indices;
};

/// Y(t_N) = xi, backward steps for i = N-1..0, Z(t_N) = Z(t_{N-1}).
/// The returned Y reports Y(0) before time 0.
BackwardSweepResult backward_sweep(const Iterate& prev, const PathLattice* current_x,
                                   const Coefficient& f, std::span<const double> xi_values,
                                   const BrownianLattice& W, const RegressionBasis& basis,
                                   std::size_t workers = 1);

}  // namespace fbsdde
