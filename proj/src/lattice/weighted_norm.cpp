#include "src/lattice/weighted_norm.hpp"

#include <algorithm>
#include <cmath>

#include "src/support/parallel.hpp"

namespace fbsdde {

namespace {

std::vector<double> time_weights(const TimeGrid& grid, double beta) {
    std::vector<double> w(grid.steps() + 1);
    for (std::size_t i = 0; i <= grid.steps(); ++i) w[i] = std::exp(beta * grid.time(i));
    return w;
}

}  // namespace

std::vector<double> s2_terms(const PathLattice& lattice, const WeightedNormConfig& cfg) {
    const auto w = time_weights(lattice.grid(), cfg.beta);
    std::vector<double> out(lattice.scenarios(), 0.0);
    for (std::size_t i = 0; i < lattice.times(); ++i) {
        const auto col = lattice.at_time(i);
        for (std::size_t m = 0; m < col.size(); ++m) {
            out[m] = std::max(out[m], w[i] * col[m] * col[m]);
        }
    }
    return out;
}

std::vector<double> h2_terms(const PathLattice& lattice, const WeightedNormConfig& cfg) {
    const auto w = time_weights(lattice.grid(), cfg.beta);
    const double dt = lattice.grid().dt();
    std::vector<double> out(lattice.scenarios(), 0.0);
    for (std::size_t i = 0; i + 1 < lattice.times(); ++i) {
        const auto col = lattice.at_time(i);
        for (std::size_t m = 0; m < col.size(); ++m) {
            out[m] += w[i] * col[m] * col[m] * dt;
        }
    }
    return out;
}

double weighted_s2_norm(const PathLattice& lattice, const WeightedNormConfig& cfg) {
    const auto t = s2_terms(lattice, cfg);
    return blocked_sum(t) / static_cast<double>(t.size());
}

double weighted_h2_norm(const PathLattice& lattice, const WeightedNormConfig& cfg) {
    const auto t = h2_terms(lattice, cfg);
    return blocked_sum(t) / static_cast<double>(t.size());
}

}  // namespace fbsdde

#include "src/lattice/iterate.hpp"

namespace fbsdde {

Iterate zero_iterate(const TimeGrid& grid, std::size_t scenarios, bool with_forward,
                     double initial_x) {
    Iterate u{std::nullopt, PathLattice(grid, scenarios, ProcessRole::StateBackward, 0.0),
              PathLattice(grid, scenarios, ProcessRole::Control, 0.0)};
    if (with_forward) u.x.emplace(grid, scenarios, ProcessRole::StateForward, initial_x);
    return u;
}

IterateDifference iterate_difference(const Iterate& next, const Iterate& prev,
                                     const WeightedNormConfig& cfg) {
    require_same_shape(next.y, prev.y, "iterate_difference");
    std::vector<double> q(next.y.scenarios(), 0.0);
    double sup = 0.0;
    auto accumulate = [&](const PathLattice& a, const PathLattice& b, bool h2) {
        const PathLattice d = difference(a, b);
        const auto terms = h2 ? h2_terms(d, cfg) : s2_terms(d, cfg);
        for (std::size_t m = 0; m < q.size(); ++m) q[m] += terms[m];
        for (double v : d.data()) sup = std::max(sup, std::abs(v));
    };
    if (next.x && prev.x) accumulate(*next.x, *prev.x, false);
    accumulate(next.y, prev.y, false);
    accumulate(next.z, prev.z, true);

    const auto moments = sample_moments(q);
    IterateDifference out;
    out.value = moments.mean;
    out.standard_error = q.size() > 1 ? moments.stddev / std::sqrt(static_cast<double>(q.size())) : 0.0;
    out.sup_abs = sup;
    return out;
}

}  // namespace fbsdde
