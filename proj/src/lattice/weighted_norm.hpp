#pragma once

#include <optional>
#include <vector>

#include "src/lattice/path_lattice.hpp"

namespace fbsdde {

/// Exponential weight e^{beta t} for the S^2 / H^2 estimators.
struct WeightedNormConfig {
    double beta = 0.0;

    /// beta = 1/T, the weight that makes the Picard map contract.
    static WeightedNormConfig for_horizon(double horizon) { return {1.0 / horizon}; }
};

/// Per-scenario S^2 terms: max_i e^{beta t_i} |v(m, t_i)|^2 over i = 0..N.
std::vector<double> s2_terms(const PathLattice& lattice, const WeightedNormConfig& cfg);

/// Per-scenario H^2 terms: sum_{i<N} e^{beta t_i} |v(m, t_i)|^2 dt
/// (left-endpoint Riemann sum; the terminal value does not contribute).
std::vector<double> h2_terms(const PathLattice& lattice, const WeightedNormConfig& cfg);

/// Empirical E[sup_t e^{beta t} |v(t)|^2].
double weighted_s2_norm(const PathLattice& lattice, const WeightedNormConfig& cfg);

/// Empirical E[int_0^T e^{beta s} |v(s)|^2 ds].
double weighted_h2_norm(const PathLattice& lattice, const WeightedNormConfig& cfg);

}  // namespace fbsdde
