#include "src/mc/binomial_tree.hpp"

#include <cmath>
#include <string>

#include "src/problem/transforms.hpp"
#include "src/support/error.hpp"

namespace fbsdde {

BinomialTree::BinomialTree(TimeGrid grid, std::size_t cap)
    : grid_(grid), step_(std::sqrt(grid.dt())) {
    if (grid.steps() > cap) {
        throw Error(ErrorCode::OracleCap, "binomial tree with N=" + std::to_string(grid.steps()) +
                                              " exceeds the cap of " + std::to_string(cap) + " steps");
    }
    if (grid.steps() >= 8 * sizeof(std::size_t) - 1) {
        throw Error(ErrorCode::OracleCap, "binomial tree too deep for path indexing");
    }
}

BrownianLattice BinomialTree::brownian() const {
    const std::size_t P = paths();
    const std::size_t N = grid_.steps();
    std::vector<double> inc(N * P);
    for (std::size_t i = 0; i < N; ++i) {
        for (std::size_t m = 0; m < P; ++m) inc[i * P + m] = increment(m, i);
    }
    return BrownianLattice(grid_, P, std::move(inc));
}

std::vector<double> BinomialTree::conditional_expectation(std::span<const double> next,
                                                          std::size_t i) const {
    const std::size_t bit = std::size_t{1} << i;
    std::vector<double> out(next.size());
    for (std::size_t m = 0; m < next.size(); ++m) {
        const std::size_t down = m & ~bit;
        out[m] = 0.5 * (next[down] + next[down | bit]);
    }
    return out;
}

TreeSolution tree_solve(const ProblemSpec& spec, const BinomialTree& tree,
                        const TreeOptions& options) {
    const TimeGrid& grid = tree.grid();
    validate_for_grid(spec, grid);
    const bool forward = spec.mode == ProblemMode::Fbsdde;
    const std::size_t P = tree.paths();
    const std::size_t N = grid.steps();
    const double dt = grid.dt();
    const double two_step = 2.0 * std::sqrt(dt);
    const WeightedNormConfig norm{options.beta.value_or(1.0 / spec.horizon)};

    const BoundCoefficient f = Coefficient(spec.f).bind(grid);
    const BoundCoefficient b = Coefficient::from_optional(spec.b).bind(grid);
    const BoundCoefficient sigma = Coefficient::from_optional(spec.sigma).bind(grid);
    const BoundCoefficient g = Coefficient::from_optional(spec.g).bind(grid);

    Iterate prev = zero_iterate(grid, P, forward, spec.initial_x);
    TreeSolution out{std::nullopt, prev.y, prev.z, {}, {}, {}, StopReason::MaxIterations};

    for (std::size_t n = 1; n <= options.max_picard; ++n) {
        const ProcessView pv{prev.x ? &*prev.x : nullptr, &prev.y, &prev.z};
        Iterate next = zero_iterate(grid, P, forward, spec.initial_x);

        if (forward) {
            PathLattice& X = *next.x;
            for (std::size_t m = 0; m < P; ++m) {
                X(m, 0) = spec.initial_x;
                for (std::size_t i = 0; i < N; ++i) {
                    const auto si = static_cast<std::ptrdiff_t>(i);
                    X(m, i + 1) = X(m, i) + b(pv, m, si) * dt + sigma(pv, m, si) * tree.increment(m, i);
                }
            }
        }

        PathLattice& Y = next.y;
        PathLattice gamma(grid, P, ProcessRole::Control);
        for (std::size_t m = 0; m < P; ++m) {
            double w_terminal = 0.0;
            for (std::size_t i = 0; i < N; ++i) w_terminal += tree.increment(m, i);
            Y(m, N) = spec.xi(w_terminal, forward ? (*next.x)(m, N) : 0.0);
        }
        for (std::size_t i = N; i-- > 0;) {
            const std::size_t bit = std::size_t{1} << i;
            for (std::size_t m = 0; m < P; ++m) {
                const std::size_t down = m & ~bit;
                const double y_down = Y(down, i + 1);
                const double y_up = Y(down | bit, i + 1);
                Y(m, i) = 0.5 * (y_up + y_down) + f(pv, m, static_cast<std::ptrdiff_t>(i)) * dt;
                gamma(m, i) = (y_up - y_down) / two_step;
            }
        }
        for (std::size_t m = 0; m < P; ++m) gamma(m, N) = gamma(m, N - 1);
        Y.set_frozen_initial(Y(0, 0));

        const ProcessView nv{next.x ? &*next.x : nullptr, &next.y, nullptr};
        for (std::size_t i = 0; i <= N; ++i) {
            for (std::size_t m = 0; m < P; ++m) {
                next.z(m, i) = gamma(m, i) - evaluate_diffusion_g(g, nv, m, static_cast<std::ptrdiff_t>(i));
            }
        }
        if (next.x) next.x->require_finite("tree_solve X");
        next.y.require_finite("tree_solve Y");
        next.z.require_finite("tree_solve Z");

        const IterateDifference d = iterate_difference(next, prev, norm);
        if (!out.iteration_diffs.empty() && out.iteration_diffs.back() > 0.0) {
            out.contraction_ratios.push_back(d.value / out.iteration_diffs.back());
        }
        out.iteration_diffs.push_back(d.value);
        out.sup_diffs.push_back(d.sup_abs);
        prev = std::move(next);
        if (d.sup_abs < options.tolerance) {
            out.stop_reason = StopReason::Tolerance;
            break;
        }
    }

    out.x = std::move(prev.x);
    out.y = std::move(prev.y);
    out.z = std::move(prev.z);
    return out;
}

}  // namespace fbsdde
