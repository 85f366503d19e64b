#include "src/solver/residual.hpp"

#include "src/problem/transforms.hpp"
#include "src/support/error.hpp"
#include "src/support/parallel.hpp"

namespace fbsdde {

namespace {

ProcessResidual summarise(const PathLattice& r, const WeightedNormConfig& cfg) {
    ProcessResidual out;
    out.mean_square.resize(r.times());
    std::vector<double> sq(r.scenarios());
    for (std::size_t i = 0; i < r.times(); ++i) {
        const auto col = r.at_time(i);
        for (std::size_t m = 0; m < sq.size(); ++m) sq[m] = col[m] * col[m];
        out.mean_square[i] = blocked_sum(sq) / static_cast<double>(sq.size());
        if (out.mean_square[i] > out.max_mean_square) {
            out.max_mean_square = out.mean_square[i];
            out.argmax = i;
        }
    }
    out.weighted = weighted_s2_norm(r, cfg);
    return out;
}

}  // namespace

ResidualReport residual_check(const PathLattice* x, const PathLattice& y, const PathLattice& z,
                              const ProblemSpec& spec, const BrownianLattice& W,
                              const WeightedNormConfig& cfg) {
    require_same_shape(y, z, "residual_check");
    if (x) require_same_shape(y, *x, "residual_check");
    if (!(y.grid() == W.grid()) || y.scenarios() != W.scenarios()) {
        throw Error(ErrorCode::GridMismatch, "residual_check: solution and Brownian lattice differ");
    }
    const bool forward = spec.mode == ProblemMode::Fbsdde;
    if (forward && !x) {
        throw Error(ErrorCode::InvalidArgument, "residual_check: forward-backward problem without X");
    }
    const TimeGrid& grid = y.grid();
    const std::size_t M = y.scenarios();
    const std::size_t N = grid.steps();
    const double dt = grid.dt();

    const BoundCoefficient f = Coefficient(spec.f).bind(grid);
    const BoundCoefficient g = Coefficient::from_optional(spec.g).bind(grid);
    const BoundCoefficient b = Coefficient::from_optional(spec.b).bind(grid);
    const BoundCoefficient sigma = Coefficient::from_optional(spec.sigma).bind(grid);
    const ProcessView u{forward ? x : nullptr, &y, &z};

    PathLattice ry(grid, M, ProcessRole::StateBackward);
    for (std::size_t m = 0; m < M; ++m) {
        const double xi = spec.xi(W.value(m, N), forward ? (*x)(m, N) : 0.0);
        double tail = 0.0;
        ry(m, N) = y(m, N) - xi;
        for (std::size_t j = N; j-- > 0;) {
            const auto sj = static_cast<std::ptrdiff_t>(j);
            tail += f(u, m, sj) * dt - (evaluate_diffusion_g(g, u, m, sj) + z(m, j)) * W.increment(m, j);
            ry(m, j) = y(m, j) - (xi + tail);
        }
    }

    ResidualReport report;
    report.y = summarise(ry, cfg);
    if (forward) {
        PathLattice rx(grid, M, ProcessRole::StateForward);
        for (std::size_t m = 0; m < M; ++m) {
            double head = spec.initial_x;
            rx(m, 0) = (*x)(m, 0) - head;
            for (std::size_t j = 0; j < N; ++j) {
                const auto sj = static_cast<std::ptrdiff_t>(j);
                head += b(u, m, sj) * dt + sigma(u, m, sj) * W.increment(m, j);
                rx(m, j + 1) = (*x)(m, j + 1) - head;
            }
        }
        report.x = summarise(rx, cfg);
    }
    return report;
}

}  // namespace fbsdde
