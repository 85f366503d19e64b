#include "src/problem/contraction.hpp"

#include <algorithm>
#include <numbers>

namespace fbsdde {

double contraction_rho(ProblemMode mode, double K, double horizon) noexcept {
    if (mode == ProblemMode::Bsde) {
        return 8.0 * K * horizon * std::max(1.0, horizon);
    }
    return 24.0 * K * std::numbers::e * std::max(1.0, horizon * horizon);
}

namespace {

ContractionCertificate make_certificate(ProblemMode mode, double K, double horizon) {
    ContractionCertificate c;
    c.mode = mode;
    c.K_effective = K;
    c.rho = contraction_rho(mode, K, horizon);
    c.satisfied = c.rho < 1.0;
    return c;
}

}  // namespace

ContractionCertificate check_contraction(const ProblemSpec& spec) {
    double K = spec.f.lipschitz_K();
    if (spec.g) K = std::max(K, spec.g->lipschitz_K());
    if (spec.mode == ProblemMode::Fbsdde) {
        if (spec.b) K = std::max(K, spec.b->lipschitz_K());
        if (spec.sigma) K = std::max(K, spec.sigma->lipschitz_K());
    }
    return make_certificate(spec.mode, K, spec.horizon);
}

double composed_lipschitz(double K_phi, double K_g) noexcept {
    return 2.0 * K_phi * (1.0 + K_g);
}

ContractionCertificate check_contraction_transformed(const ProblemSpec& spec) {
    if (!spec.non_homogeneous()) return check_contraction(spec);
    const double K_g = spec.g->lipschitz_K();
    double K = composed_lipschitz(spec.f.lipschitz_K(), K_g);
    if (spec.mode == ProblemMode::Fbsdde) {
        if (spec.b) K = std::max(K, composed_lipschitz(spec.b->lipschitz_K(), K_g));
        if (spec.sigma) K = std::max(K, composed_lipschitz(spec.sigma->lipschitz_K(), K_g));
    }
    return make_certificate(spec.mode, K, spec.horizon);
}

}  // namespace fbsdde
