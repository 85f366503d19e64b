#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "helpers.hpp"
#include "src/mc/binomial_tree.hpp"
#include "src/problem/transforms.hpp"
#include "src/solver/picard.hpp"
#include "src/solver/sweeps.hpp"

using namespace fbsdde;
using namespace fbsdde::testing;

namespace {

const DelayMeasure kNow = DelayMeasure::dirac(1.0);

Iterate zeros(const TimeGrid& grid, std::size_t M, double x = 0.0) { return zero_iterate(grid, M, true, x); }

Coefficient coef(CoefficientKind k, const std::string& fn, std::vector<double> p) {
    return Coefficient(coefficient(k, fn, std::move(p), kNow));
}

/// Delayed, fully coupled problem used by the adaptedness and determinism checks.
ProblemSpec delayed_problem(std::size_t N) {
    const double T = 1.0;
    const double dt = T / double(N);
    const DelayMeasure two_back({{0.0, 0.5}, {-2.0 * dt, 0.5}}, T);
    return forward_backward(T, 0.2, TerminalRule("affine", {0.0, 1.0, 0.5}),
                  coefficient(CoefficientKind::DriverF, "linear", {0.05, 0.1, 0.05}, two_back, 0.003),
                  coefficient(CoefficientKind::DriftB, "linear", {0.0, 0.1, 0.05}, two_back, 0.003),
                  coefficient(CoefficientKind::DiffusionSigma, "affine", {0.3, 0.05, 0.0, 0.05}, two_back, 0.003));
}

BrownianLattice shuffle_from(const BrownianLattice& W, std::size_t first, std::uint64_t seed) {
    const std::size_t M = W.scenarios();
    std::vector<std::size_t> perm(M);
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), std::mt19937_64(seed));
    std::vector<double> inc(W.increments().begin(), W.increments().end());
    for (std::size_t j = first; j < W.grid().steps(); ++j) {
        for (std::size_t m = 0; m < M; ++m) inc[j * M + m] = W.increment(perm[m], j);
    }
    return BrownianLattice(W.grid(), M, std::move(inc), W.seed());
}

}  // namespace

TEST(ForwardSweep, ZeroCoefficients) {
    const TimeGrid grid(1.0, 4);
    const auto W = generate_brownian(1, 10, grid);
    const auto X = forward_sweep(zeros(grid, 10), Coefficient(), Coefficient(), W, 1.5);
    for (double v : X.data()) EXPECT_EQ(v, 1.5);
    EXPECT_EQ(X.frozen_initial(), 1.5);
}

TEST(ForwardSweep, ConstantDrift) {
    const TimeGrid grid(1.0, 4);
    const auto W = generate_brownian(1, 10, grid);
    const auto X = forward_sweep(zeros(grid, 10), coef(CoefficientKind::DriftB, "constant", {1.0}), Coefficient(),
                                 W, 0.5);
    for (std::size_t m = 0; m < 10; ++m) {
        for (std::size_t i = 0; i <= 4; ++i) EXPECT_EQ(X(m, i), 0.5 + grid.time(i));
    }
}

TEST(ForwardSweep, PureIntegrator) {
    const TimeGrid grid(1.0, 8);
    const auto W = generate_brownian(2, 10, grid);
    const auto sigma = coef(CoefficientKind::DiffusionSigma, "constant", {1.0});
    const auto X0 = forward_sweep(zeros(grid, 10), Coefficient(), sigma, W, 0.0);
    const auto X1 = forward_sweep(zeros(grid, 10), Coefficient(), sigma, W, 1.25);
    for (std::size_t m = 0; m < 10; ++m) {
        for (std::size_t i = 0; i <= 8; ++i) {
            EXPECT_EQ(X0(m, i), W.value(m, i));
            EXPECT_NEAR(X1(m, i), 1.25 + W.value(m, i), 1e-14);
        }
    }
}

TEST(ForwardSweep, GridMismatch) {
    const auto W = generate_brownian(1, 10, TimeGrid(1.0, 4));
    EXPECT_THROW(forward_sweep(zeros(TimeGrid(1.0, 8), 10), Coefficient(), Coefficient(), W, 0.0), Error);
    EXPECT_THROW(forward_sweep(zeros(TimeGrid(1.0, 4), 11), Coefficient(), Coefficient(), W, 0.0), Error);
}

TEST(BackwardSweep, ConstantTerminal) {
    const TimeGrid grid(1.0, 8);
    const auto W = generate_brownian(3, 500, grid);
    const std::vector<double> xi(500, 0.7);
    const auto r = backward_sweep(zeros(grid, 500), nullptr, Coefficient(zero_driver(1.0)), xi, W, {});
    for (double v : r.y.data()) EXPECT_EQ(v, 0.7);
    for (double v : r.z.data()) EXPECT_EQ(v, 0.0);
}

TEST(BackwardSweep, ConstantDriver) {
    const TimeGrid grid(2.0, 8);
    const auto W = generate_brownian(3, 300, grid);
    const std::vector<double> xi(300, 0.0);
    const auto r = backward_sweep(zeros(grid, 300), nullptr, Coefficient(driver("constant", {1.0}, 2.0)), xi, W, {});
    for (std::size_t i = 0; i <= 8; ++i) {
        for (std::size_t m = 0; m < 300; ++m) {
            EXPECT_EQ(r.y(m, i), 2.0 - grid.time(i));
            EXPECT_EQ(r.z(m, i), 0.0);
        }
    }
}

TEST(BackwardSweep, BrownianTerminalMatchesTree) {
    const TimeGrid grid(1.0, 8);
    const std::size_t M = 50000;
    const auto W = generate_brownian(4, M, grid);
    std::vector<double> xi(M);
    for (std::size_t m = 0; m < M; ++m) xi[m] = W.value(m, 8);
    RegressionBasis basis;
    basis.max_degree = 1;
    const auto r = backward_sweep(zeros(grid, M), nullptr, Coefficient(zero_driver(1.0)), xi, W, basis);
    const auto tree = tree_solve(bsde(1.0, brownian_terminal(), zero_driver(1.0)), BinomialTree(grid));
    EXPECT_NEAR(tree.z(0, 3), 1.0, 1e-14);
    const double tol = 6.0 / std::sqrt(double(M));
    for (std::size_t i = 0; i < 8; ++i) {
        double err_y = 0.0, err_z = 0.0;
        for (std::size_t m = 0; m < M; ++m) {
            err_y = std::max(err_y, std::abs(r.y(m, i) - W.value(m, i)) / (1.0 + std::abs(W.value(m, i))));
            err_z = std::max(err_z, std::abs(r.z(m, i) - 1.0) / (1.0 + std::abs(W.value(m, i))));
        }
        EXPECT_LT(err_y, tol) << "i=" << i;
        EXPECT_LT(err_z, 3.0 * std::sqrt(double(8)) * tol) << "i=" << i;
    }
    EXPECT_NEAR(r.y(0, 0), tree.y0(), 4.0 / std::sqrt(double(M)));
}

TEST(BackwardSweep, TerminalConditionExact) {
    const ProblemSpec s = delayed_problem(8);
    SolverConfig cfg = config(1.0, 8, 2000, 5);
    cfg.max_picard = 3;
    const auto W = generate_brownian(cfg.seed, cfg.scenarios, cfg.grid);
    const auto sol = solve_general(s, cfg, W);
    for (std::size_t m = 0; m < 2000; ++m) EXPECT_EQ(sol.y(m, 8), s.xi(W.value(m, 8), (*sol.x)(m, 8)));
}

TEST(Picard, ConstantFixedPoint) {
    const auto s = forward_backward(1.0, 2.0, TerminalRule::constant(5.0), zero_driver(1.0),
                          coefficient(CoefficientKind::DriftB, "zero", {}, kNow),
                          coefficient(CoefficientKind::DiffusionSigma, "zero", {}, kNow));
    const auto sol = picard_solve(s, config(1.0, 8, 1000));
    for (double v : sol.x->data()) EXPECT_EQ(v, 2.0);
    for (double v : sol.y.data()) EXPECT_EQ(v, 5.0);
    for (double v : sol.z.data()) EXPECT_EQ(v, 0.0);
    ASSERT_EQ(sol.diagnostics.iterations(), 2U);
    EXPECT_EQ(sol.diagnostics.iteration_diffs[1], 0.0);
    EXPECT_EQ(sol.diagnostics.stop_reason, StopReason::Tolerance);
    EXPECT_EQ(sol.diagnostics.y0_stderr, 0.0);
    ASSERT_TRUE(sol.diagnostics.residual);
    EXPECT_EQ(sol.diagnostics.residual->y.max_mean_square, 0.0);
    EXPECT_EQ(sol.diagnostics.residual->x->max_mean_square, 0.0);
}

TEST(Picard, LinearDriverMatchesTree) {
    const double kappa = 0.1;
    const auto s = bsde(1.0, TerminalRule::constant(1.0), driver("linear", {0.0, kappa, 0.0}, 1.0, kappa));
    SolverConfig cfg = config(1.0, 10, 2000);
    cfg.picard_tol = 1e-20;
    const auto mc = picard_solve(s, cfg);
    const auto tree = tree_solve(s, BinomialTree(cfg.grid));
    EXPECT_NEAR(mc.y0(), tree.y0(), 1e-12);
    // Left-point driver on Y(t_i) itself: Y(t_i) = Y(t_{i+1}) / (1 - kappa dt).
    EXPECT_NEAR(tree.y0(), std::pow(1.0 - kappa * 0.1, -10), 1e-12);
    EXPECT_TRUE(mc.diagnostics.certified);
}

TEST(Picard, RejectsNonHomogeneous) {
    const auto s = bsde(1.0, TerminalRule::constant(1.0), zero_driver(1.0),
                        coefficient(CoefficientKind::DiffusionG, "scaled-identity-y", {1.0}, kNow));
    EXPECT_THROW(picard_solve(s, config(1.0, 4, 100)), Error);
}

TEST(Picard, UncertifiedStillRuns) {
    const auto s = bsde(1.0, TerminalRule::constant(1.0), driver("linear", {0.0, 0.2, 0.0}, 1.0, 0.2));
    const auto sol = picard_solve(s, config(1.0, 4, 100));
    EXPECT_FALSE(sol.diagnostics.certified);
    ASSERT_FALSE(sol.diagnostics.warnings.empty());
    EXPECT_NE(sol.diagnostics.warnings.front().find("uncertified"), std::string::npos);
    EXPECT_EQ(sol.diagnostics.stop_reason, StopReason::Tolerance);
}

TEST(Picard, DecoupledConvergesInOneStep) {
    const auto s = forward_backward(1.0, 0.3, TerminalRule("quadratic", {0.0, 1.0, 1.0, 0.5, 0.0, 0.0}),
                          driver("constant", {0.4}, 1.0),
                          coefficient(CoefficientKind::DriftB, "constant", {0.1}, kNow),
                          coefficient(CoefficientKind::DiffusionSigma, "constant", {0.2}, kNow));
    SolverConfig one = config(1.0, 8, 3000);
    one.max_picard = 1;
    SolverConfig two = one;
    two.max_picard = 2;
    const auto a = picard_solve(s, one);
    const auto b = picard_solve(s, two);
    EXPECT_EQ(*a.x, *b.x);
    EXPECT_EQ(a.y, b.y);
    EXPECT_EQ(a.z, b.z);
    EXPECT_EQ(b.diagnostics.iteration_diffs[1], 0.0);
}

TEST(Picard, SeedDeterminismAndWorkerIndependence) {
    const ProblemSpec s = delayed_problem(8);
    SolverConfig cfg = config(1.0, 8, 5000, 9);
    const auto a = solve_general(s, cfg);
    const auto b = solve_general(s, cfg);
    cfg.workers = 4;
    const auto c = solve_general(s, cfg);
    for (const auto* other : {&b, &c}) {
        EXPECT_EQ(*a.x, *other->x);
        EXPECT_EQ(a.y, other->y);
        EXPECT_EQ(a.z, other->z);
        EXPECT_EQ(a.diagnostics.iteration_diffs, other->diagnostics.iteration_diffs);
        EXPECT_EQ(a.diagnostics.y0_stderr, other->diagnostics.y0_stderr);
    }
}

TEST(Picard, ConditioningFailureCarriesDiagnostics) {
    // X = W exactly, so W and X are collinear regressors.
    const auto s = forward_backward(1.0, 0.0, brownian_terminal(), zero_driver(1.0),
                          coefficient(CoefficientKind::DriftB, "zero", {}, kNow),
                          coefficient(CoefficientKind::DiffusionSigma, "constant", {1.0}, kNow));
    SolverConfig cfg = config(1.0, 4, 500);
    cfg.basis.max_degree = 1;
    cfg.basis.ridge = false;
    try {
        picard_solve(s, cfg);
        FAIL() << "expected a solver failure";
    } catch (const SolverFailure& e) {
        EXPECT_EQ(e.code(), ErrorCode::Conditioning);
        ASSERT_TRUE(e.time_index());
        EXPECT_EQ(*e.time_index(), 3U);
        EXPECT_NE(std::string(e.what()).find("time index 3"), std::string::npos);
    }
    cfg.basis.ridge = true;
    const auto sol = picard_solve(s, cfg);
    EXPECT_FALSE(sol.diagnostics.damped.empty());
}

TEST(SolveGeneral, ZeroGIsPicard) {
    auto s = delayed_problem(8);
    s.g = coefficient(CoefficientKind::DiffusionG, "zero", {}, kNow);
    const auto cfg = config(1.0, 8, 3000, 2);
    const auto a = solve_general(s, cfg);
    const auto b = picard_solve(s, cfg);
    EXPECT_EQ(*a.x, *b.x);
    EXPECT_EQ(a.y, b.y);
    EXPECT_EQ(a.z, b.z);
    EXPECT_FALSE(a.homogeneous_z);
}

TEST(SolveGeneral, IdentityGOnConstant) {
    const double c = 1.5;
    const auto s = bsde(1.0, TerminalRule::constant(c), zero_driver(1.0),
                        coefficient(CoefficientKind::DiffusionG, "scaled-identity-y", {1.0}, kNow));
    const auto sol = solve_general(s, config(1.0, 8, 2000));
    for (double v : sol.y.data()) EXPECT_EQ(v, c);
    for (double v : sol.z.data()) EXPECT_EQ(v, -c);
    ASSERT_TRUE(sol.homogeneous_z);
    for (double v : sol.homogeneous_z->data()) EXPECT_EQ(v, 0.0);
    EXPECT_EQ(sol.diagnostics.residual->y.max_mean_square, 0.0);
}

TEST(SolveGeneral, TransformCoherence) {
    auto s = delayed_problem(8);
    s.g = coefficient(CoefficientKind::DiffusionG, "affine", {0.05, 0.1, -0.05, 0.0},
                      DelayMeasure({{0.0, 0.5}, {-0.25, 0.5}}, 1.0), 0.002);
    const auto sol = solve_general(s, config(1.0, 8, 2000, 4));
    ASSERT_TRUE(sol.homogeneous_z);
    const BoundCoefficient g = Coefficient(*s.g).bind(sol.y.grid());
    const ProcessView u{&*sol.x, &sol.y, nullptr};
    for (std::size_t i = 0; i <= 8; ++i) {
        for (std::size_t m = 0; m < 2000; ++m) {
            const double gv = evaluate_diffusion_g(g, u, m, std::ptrdiff_t(i));
            const double zbar = (*sol.homogeneous_z)(m, i);
            // (a - b) + b can differ from a in the last bit
            EXPECT_NEAR(sol.z(m, i) + gv, zbar, 4e-16 * (std::abs(zbar) + std::abs(gv)));
        }
    }
}

TEST(SolveGeneral, SeedChangeWithinReportedError) {
    const auto s = bsde(1.0, TerminalRule("quadratic", {0.0, 1.0, 0.0, 0.5, 0.0, 0.0}),
                        driver("linear", {0.0, 0.05, 0.05}, 1.0, 0.05),
                        coefficient(CoefficientKind::DiffusionG, "scaled-identity-y", {0.1}, kNow, 0.1));
    const auto a = solve_general(s, config(1.0, 8, 20000, 1));
    const auto b = solve_general(s, config(1.0, 8, 20000, 2));
    EXPECT_GT(a.diagnostics.y0_stderr, 0.0);
    EXPECT_LE(std::abs(a.y0() - b.y0()), 4.0 * a.diagnostics.y0_stderr);
}

TEST(Residual, FlagsCorruptedIndex) {
    const auto s = bsde(1.0, brownian_terminal(), zero_driver(1.0));
    const auto cfg = config(1.0, 8, 4000, 3);
    const auto W = generate_brownian(cfg.seed, cfg.scenarios, cfg.grid);
    auto sol = picard_solve(s, cfg, W);
    const auto clean = residual_check(sol, s, W, cfg.norm());
    for (std::size_t m = 0; m < 4000; ++m) sol.y(m, 5) += 1.0;
    const auto bad = residual_check(sol, s, W, cfg.norm());
    EXPECT_EQ(bad.y.argmax, 5U);
    EXPECT_NEAR(bad.y.max_mean_square, 1.0, 0.05);
    for (std::size_t i = 0; i <= 8; ++i) {
        if (i != 5) EXPECT_EQ(bad.y.mean_square[i], clean.y.mean_square[i]);
    }
}

TEST(Residual, ForwardPartCancels) {
    const ProblemSpec s = delayed_problem(8);
    SolverConfig cfg = config(1.0, 8, 2000, 6);
    cfg.picard_tol = 1e-14;
    cfg.max_picard = 30;
    const auto sol = solve_general(s, cfg);
    // X is rebuilt from the previous iterate; after convergence the
    // forward defect is of the order of the final Picard step.
    EXPECT_LT(sol.diagnostics.residual->x->max_mean_square, 1e-12);
}

TEST(Adaptedness, BackwardStepIgnoresFutureIncrements) {
    const std::size_t N = 8, M = 3000;
    const ProblemSpec s = delayed_problem(N);
    SolverConfig cfg = config(1.0, N, M, 12);
    cfg.max_picard = 1;
    cfg.basis.use_delay_averages = true;
    const auto W = generate_brownian(cfg.seed, M, cfg.grid);
    const auto first = solve_general(s, cfg, W);
    const Iterate prev{first.x, first.y, first.z};

    const Coefficient b = Coefficient::from_optional(s.b);
    const Coefficient sigma = Coefficient::from_optional(s.sigma);
    const BoundCoefficient f = Coefficient(s.f).bind(cfg.grid);
    const auto X = forward_sweep(prev, b, sigma, W, s.initial_x);
    const std::size_t i = 4;
    const auto y_next = first.y.at_time(i + 1);

    const auto Wf = shuffle_from(W, i + 1, 99);
    const auto Xf = forward_sweep(prev, b, sigma, Wf, s.initial_x);
    for (std::size_t k = 0; k <= i + 1; ++k) {
        for (std::size_t m = 0; m < M; ++m) ASSERT_EQ(Xf(m, k), X(m, k));
    }
    const auto ref = backward_step(i, y_next, prev, &X, f, W, cfg.basis);
    const auto alt = backward_step(i, y_next, prev, &Xf, f, Wf, cfg.basis);
    EXPECT_EQ(ref.y_fit, alt.y_fit);
    EXPECT_EQ(ref.z_fit, alt.z_fit);
    EXPECT_EQ(ref.y, alt.y);
    EXPECT_EQ(ref.z, alt.z);

    const auto Wi = shuffle_from(W, i, 7);
    const auto Xi = forward_sweep(prev, b, sigma, Wi, s.initial_x);
    EXPECT_EQ(backward_design(i, cfg.basis, W, &X, prev, f.atoms()),
              backward_design(i, cfg.basis, Wi, &Xi, prev, f.atoms()));
}
