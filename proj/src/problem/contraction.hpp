#pragma once

#include "src/problem/problem_spec.hpp"

namespace fbsdde {

/// Sufficient condition for the Picard map to contract.
///   bsde:   rho = 8 K T max(1, T)
///   fbsdde: rho = 24 K e max(1, T^2)
/// satisfied is the strict inequality rho < 1.
struct ContractionCertificate {
    ProblemMode mode = ProblemMode::Bsde;
    double K_effective = 0.0;
    double rho = 0.0;
    bool satisfied = false;
};

double contraction_rho(ProblemMode mode, double K, double horizon) noexcept;

/// K_effective is the largest declared constant among the coefficients
/// present (f and g; plus b and sigma in fbsdde mode).
ContractionCertificate check_contraction(const ProblemSpec& spec);

/// Lipschitz bookkeeping for phi(., z - g(.)): 2 K_phi (1 + K_g).
double composed_lipschitz(double K_phi, double K_g) noexcept;

/// Certificate of the homogeneous problem obtained by shifting z by g,
/// with every shifted coefficient carrying composed_lipschitz(K_phi, K_g).
/// Equal to check_contraction when g is absent or zero.
ContractionCertificate check_contraction_transformed(const ProblemSpec& spec);

}  // namespace fbsdde
