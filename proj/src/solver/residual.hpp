#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "src/lattice/path_lattice.hpp"
#include "src/lattice/weighted_norm.hpp"
#include "src/mc/brownian.hpp"
#include "src/problem/problem_spec.hpp"

namespace fbsdde {

struct ProcessResidual {
    std::vector<double> mean_square;   ///< E|R(t_i)|^2 per time index
    double max_mean_square = 0.0;
    std::size_t argmax = 0;
    double weighted = 0.0;             ///< E[max_i e^{beta t_i} |R(t_i)|^2]
};

struct ResidualReport {
    ProcessResidual y;
    std::optional<ProcessResidual> x;

    double max_mean_square() const noexcept {
        return x ? std::max(y.max_mean_square, x->max_mean_square) : y.max_mean_square;
    }
};

/// Defect of (X, Y, Z) in the discretised original equation, per scenario:
///   R_Y(t_i) = Y(t_i) - [xi + sum_{j>=i} f(t_j, U) dt - sum_{j>=i} (g(t_j, X, Y) + Z(t_j)) dW_j]
///   R_X(t_i) = X(t_i) - [x + sum_{j<i} b(t_j, U) dt + sum_{j<i} sigma(t_j, U) dW_j]
/// with the same left-point conventions as the solver.
ResidualReport residual_check(const PathLattice* x, const PathLattice& y, const PathLattice& z,
                              const ProblemSpec& spec, const BrownianLattice& W,
                              const WeightedNormConfig& cfg);

}  // namespace fbsdde
