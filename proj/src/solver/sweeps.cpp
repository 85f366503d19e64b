#include "src/solver/sweeps.hpp"

#include <algorithm>
#include <string>

#include "src/support/error.hpp"
#include "src/support/parallel.hpp"

namespace fbsdde {

namespace {

void require_compatible(const Iterate& prev, const BrownianLattice& W, const char* context) {
    if (!(prev.y.grid() == W.grid()) || prev.y.scenarios() != W.scenarios()) {
        throw Error(ErrorCode::GridMismatch,
                    std::string(context) + ": iterate and Brownian lattice differ in grid or scenarios");
    }
    require_same_shape(prev.y, prev.z, context);
    if (prev.x) require_same_shape(prev.y, *prev.x, context);
}

ProcessView view_of(const Iterate& u) {
    return {u.x ? &*u.x : nullptr, &u.y, &u.z};
}

}  // namespace

PathLattice forward_sweep(const Iterate& prev, const Coefficient& b, const Coefficient& sigma,
                          const BrownianLattice& W, double x, std::size_t workers) {
    require_compatible(prev, W, "forward_sweep");
    const TimeGrid& grid = W.grid();
    const std::size_t M = W.scenarios();
    const std::size_t N = grid.steps();
    const double dt = grid.dt();
    const BoundCoefficient bb = b.bind(grid);
    const BoundCoefficient bs = sigma.bind(grid);
    const ProcessView pv = view_of(prev);

    PathLattice X(grid, M, ProcessRole::StateForward, x);
    for_each_block(M, workers, [&](const BlockRange& r) {
        for (std::size_t m = r.begin; m < r.end; ++m) {
            double state = x;
            X(m, 0) = state;
            for (std::size_t i = 0; i < N; ++i) {
                const auto si = static_cast<std::ptrdiff_t>(i);
                state += bb(pv, m, si) * dt + bs(pv, m, si) * W.increment(m, i);
                X(m, i + 1) = state;
            }
        }
    });
    X.require_finite("forward sweep X");
    return X;
}

DesignMatrix backward_design(std::size_t i, const RegressionBasis& basis, const BrownianLattice& W,
                             const PathLattice* current_x, const Iterate& prev,
                             std::span<const ResolvedAtom> driver_atoms) {
    const std::size_t M = W.scenarios();
    std::vector<std::vector<double>> owned;
    std::vector<std::span<const double>> regressors;
    if (basis.use_brownian) regressors.push_back(W.values_at(i));
    if (basis.use_state && current_x) regressors.push_back(current_x->at_time(i));
    if (basis.use_delay_averages && !driver_atoms.empty()) {
        const bool instantaneous = driver_atoms.size() == 1 && driver_atoms[0].offset == 0;
        const auto si = static_cast<std::ptrdiff_t>(i);
        if (current_x && !instantaneous) {
            auto& col = owned.emplace_back(M);
            for (std::size_t m = 0; m < M; ++m) col[m] = delay_average(*current_x, driver_atoms, m, si);
        }
        auto& col = owned.emplace_back(M);
        for (std::size_t m = 0; m < M; ++m) col[m] = delay_average(prev.y, driver_atoms, m, si);
    }
    for (const auto& c : owned) regressors.emplace_back(c);
    return polynomial_design(regressors, M, basis.max_degree);
}

BackwardStepResult backward_step(std::size_t i, std::span<const double> y_next, const Iterate& prev,
                                 const PathLattice* current_x, const BoundCoefficient& f,
                                 const BrownianLattice& W, const RegressionBasis& basis,
                                 std::size_t workers) {
    require_compatible(prev, W, "backward_step");
    const std::size_t M = W.scenarios();
    if (i >= W.grid().steps()) {
        throw Error(ErrorCode::Bounds, "backward step at time index " + std::to_string(i) +
                                           " needs i < N");
    }
    if (y_next.size() != M) {
        throw Error(ErrorCode::GridMismatch, "backward_step: Y(t_{i+1}) has the wrong scenario count");
    }
    const double dt = W.grid().dt();
    const ProcessView pv = view_of(prev);
    const auto dW = W.increments_at(i);

    BackwardStepResult out;
    out.driver.resize(M);
    std::vector<double> target_y(M);
    for_each_block(M, workers, [&](const BlockRange& r) {
        for (std::size_t m = r.begin; m < r.end; ++m) {
            const double fv = f(pv, m, static_cast<std::ptrdiff_t>(i));
            out.driver[m] = fv;
            target_y[m] = y_next[m] + fv * dt;
        }
    });

    const DesignMatrix design = backward_design(i, basis, W, current_x, prev, f.atoms());
    const Regressor reg(design, basis.ridge, i, workers);
    out.y_fit = reg.fit(target_y);
    out.y = reg.predict(out.y_fit);
    // dW_i is independent of F_{t_i} with mean zero, so a deterministic
    // Y(t_{i+1}) has Z(t_i) = 0 exactly; the regression would only add noise.
    const bool deterministic_next =
        std::all_of(y_next.begin(), y_next.end(), [&](double v) { return v == y_next.front(); });
    if (deterministic_next) {
        out.z_fit = reg.fit(std::vector<double>(M, 0.0));
    } else {
        // Y(t_i) is F_{t_i}-measurable, so subtracting it leaves
        // E[. dW_i | F_{t_i}] unchanged while removing the part of Y(t_{i+1})
        // known at t_i from the noise of the estimate.
        std::vector<double> target_z(M);
        for_each_block(M, workers, [&](const BlockRange& r) {
            for (std::size_t m = r.begin; m < r.end; ++m) target_z[m] = (y_next[m] - out.y[m]) * dW[m] / dt;
        });
        out.z_fit = reg.fit(target_z);
    }
    out.z = reg.predict(out.z_fit);
    out.damped = reg.damped();
    return out;
}

BackwardSweepResult backward_sweep(const Iterate& prev, const PathLattice* current_x,
                                   const Coefficient& f, std::span<const double> xi_values,
                                   const BrownianLattice& W, const RegressionBasis& basis,
                                   std::size_t workers) {
    require_compatible(prev, W, "backward_sweep");
    const TimeGrid& grid = W.grid();
    const std::size_t M = W.scenarios();
    const std::size_t N = grid.steps();
    if (xi_values.size() != M) {
        throw Error(ErrorCode::GridMismatch, "backward_sweep: terminal values have the wrong scenario count");
    }
    if (current_x) require_same_shape(prev.y, *current_x, "backward_sweep");
    const BoundCoefficient bf = f.bind(grid);
    const double dt = grid.dt();

    BackwardSweepResult out{PathLattice(grid, M, ProcessRole::StateBackward),
                            PathLattice(grid, M, ProcessRole::Control),
                            std::vector<double>(xi_values.begin(), xi_values.end()),
                            {}};
    auto yN = out.y.at_time(N);
    for (std::size_t m = 0; m < M; ++m) yN[m] = xi_values[m];

    for (std::size_t i = N; i-- > 0;) {
        BackwardStepResult step = backward_step(i, out.y.at_time(i + 1), prev, current_x, bf, W, basis, workers);
        auto yi = out.y.at_time(i);
        auto zi = out.z.at_time(i);
        for (std::size_t m = 0; m < M; ++m) {
            yi[m] = step.y[m];
            zi[m] = step.z[m];
            out.pathwise_y0[m] += step.driver[m] * dt;
        }
        if (step.damped) out.damped_indices.push_back(i);
    }
    std::reverse(out.damped_indices.begin(), out.damped_indices.end());
    auto zN = out.z.at_time(N);
    const auto zN1 = out.z.at_time(N - 1);
    for (std::size_t m = 0; m < M; ++m) zN[m] = zN1[m];

    out.y.require_finite("backward sweep Y");
    out.z.require_finite("backward sweep Z");
    out.y.set_frozen_initial(out.y(0, 0));
    return out;
}

}  // namespace fbsdde
