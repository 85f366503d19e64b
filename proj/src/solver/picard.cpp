#include "src/solver/picard.hpp"

#include <cmath>
#include <sstream>

#include "src/problem/transforms.hpp"
#include "src/solver/sweeps.hpp"
#include "src/support/parallel.hpp"

namespace fbsdde {

void validate(const SolverConfig& cfg, const ProblemSpec& spec) {
    if (cfg.scenarios < 2) throw Error(ErrorCode::InvalidArgument, "need at least 2 scenarios");
    if (cfg.max_picard < 1) throw Error(ErrorCode::InvalidArgument, "max_picard must be at least 1");
    if (!(cfg.picard_tol > 0.0)) throw Error(ErrorCode::InvalidArgument, "picard_tol must be positive");
    if (cfg.workers < 1) throw Error(ErrorCode::InvalidArgument, "workers must be at least 1");
    if (cfg.beta && !(*cfg.beta >= 0.0 && std::isfinite(*cfg.beta))) {
        throw Error(ErrorCode::InvalidArgument, "beta must be finite and non-negative");
    }
    if (std::abs(cfg.grid.horizon() - spec.horizon) > 1e-12 * spec.horizon) {
        throw Error(ErrorCode::GridMismatch, "solver grid horizon differs from the problem horizon");
    }
}

namespace {

struct Coefficients {
    Coefficient b;
    Coefficient sigma;
    Coefficient f;
};

struct PicardRun {
    Iterate u;
    SolverDiagnostics diagnostics;
};

PicardRun run_picard(const ProblemSpec& spec, const Coefficients& c, const SolverConfig& cfg,
                     const BrownianLattice& W) {
    if (!(W.grid() == cfg.grid) || W.scenarios() != cfg.scenarios) {
        throw Error(ErrorCode::GridMismatch, "Brownian lattice does not match the solver configuration");
    }
    const bool forward = spec.mode == ProblemMode::Fbsdde;
    const std::size_t M = cfg.scenarios;
    const std::size_t N = cfg.grid.steps();
    const WeightedNormConfig norm = cfg.norm();

    PicardRun run{zero_iterate(cfg.grid, M, forward, spec.initial_x), {}};
    SolverDiagnostics& diag = run.diagnostics;
    diag.certificate = check_contraction(spec);
    diag.transformed_certificate = check_contraction_transformed(spec);
    diag.certified = diag.certificate.satisfied;
    if (!diag.certified) {
        std::ostringstream os;
        os << "contraction condition not satisfied (rho=" << diag.certificate.rho
           << "); results are uncertified";
        diag.warnings.push_back(os.str());
    }

    std::vector<double> xi(M);
    try {
        for (std::size_t n = 1; n <= cfg.max_picard; ++n) {
            const Iterate& prev = run.u;
            Iterate next{std::nullopt, prev.y, prev.z};
            if (forward) next.x = forward_sweep(prev, c.b, c.sigma, W, spec.initial_x, cfg.workers);
            for (std::size_t m = 0; m < M; ++m) {
                xi[m] = spec.xi(W.value(m, N), forward ? (*next.x)(m, N) : 0.0);
                if (!std::isfinite(xi[m])) {
                    throw Error(ErrorCode::NonFinite, "terminal value is not finite in scenario " + std::to_string(m));
                }
            }
            BackwardSweepResult sweep = backward_sweep(prev, next.x ? &*next.x : nullptr, c.f, xi, W,
                                                       cfg.basis, cfg.workers);
            next.y = std::move(sweep.y);
            next.z = std::move(sweep.z);
            for (std::size_t i : sweep.damped_indices) diag.damped.push_back({n, i});

            const IterateDifference d = iterate_difference(next, prev, norm);
            if (!diag.iteration_diffs.empty() && diag.iteration_diffs.back() > 0.0) {
                const double dp = diag.iteration_diffs.back();
                const double sp = diag.diff_stderr.back();
                const double r = d.value / dp;
                const double rel_next = d.value > 0.0 ? d.standard_error / d.value : 0.0;
                diag.contraction_ratios.push_back(r);
                diag.ratio_stderr.push_back(r * std::hypot(rel_next, sp / dp));
            }
            diag.iteration_diffs.push_back(d.value);
            diag.diff_stderr.push_back(d.standard_error);

            const auto mom = sample_moments(sweep.pathwise_y0, cfg.workers);
            diag.y0_stderr = mom.stddev / std::sqrt(static_cast<double>(M));
            run.u = std::move(next);
            if (d.value < cfg.picard_tol) {
                diag.stop_reason = StopReason::Tolerance;
                break;
            }
        }
    } catch (const ConditioningError& e) {
        throw SolverFailure(e, diag, e.time_index());
    } catch (const SolverFailure&) {
        throw;
    } catch (const Error& e) {
        throw SolverFailure(e, diag, std::nullopt);
    }
    if (diag.stop_reason == StopReason::MaxIterations) {
        diag.warnings.push_back("Picard iteration stopped at max_picard=" + std::to_string(cfg.max_picard) +
                                " before reaching the tolerance");
    }
    return run;
}

}  // namespace

SolutionTriple picard_solve(const ProblemSpec& spec, const SolverConfig& cfg) {
    validate(spec);
    validate(cfg, spec);
    return picard_solve(spec, cfg, generate_brownian(cfg.seed, cfg.scenarios, cfg.grid, cfg.workers));
}

SolutionTriple picard_solve(const ProblemSpec& spec, const SolverConfig& cfg, const BrownianLattice& W) {
    validate_for_grid(spec, cfg.grid);
    validate(cfg, spec);
    if (spec.non_homogeneous()) {
        throw Error(ErrorCode::InvalidArgument,
                    "picard_solve needs g absent or zero; use solve_general for non-homogeneous problems");
    }
    const Coefficients c{Coefficient::from_optional(spec.b), Coefficient::from_optional(spec.sigma),
                         Coefficient(spec.f)};
    PicardRun run = run_picard(spec, c, cfg, W);
    SolutionTriple out{std::move(run.u.x), std::move(run.u.y), std::move(run.u.z), std::nullopt,
                       std::move(run.diagnostics)};
    out.diagnostics.residual = residual_check(out, spec, W, cfg.norm());
    return out;
}

SolutionTriple solve_general(const ProblemSpec& spec, const SolverConfig& cfg) {
    validate(spec);
    validate(cfg, spec);
    return solve_general(spec, cfg, generate_brownian(cfg.seed, cfg.scenarios, cfg.grid, cfg.workers));
}

SolutionTriple solve_general(const ProblemSpec& spec, const SolverConfig& cfg, const BrownianLattice& W) {
    if (!spec.non_homogeneous()) return picard_solve(spec, cfg, W);
    validate_for_grid(spec, cfg.grid);
    validate(cfg, spec);

    const TransformedCoefficients t = make_transformed_coefficients(spec.b, spec.sigma, spec.f, *spec.g);
    const bool forward = spec.mode == ProblemMode::Fbsdde;
    const Coefficients c{forward ? t.b : Coefficient(), forward ? t.sigma : Coefficient(), t.f};
    PicardRun run = run_picard(spec, c, cfg, W);

    auto [y, z] = map_back_solution(run.u.y, run.u.z, *spec.g, run.u.x ? &*run.u.x : nullptr);
    SolutionTriple out{std::move(run.u.x), std::move(y), std::move(z), std::move(run.u.z),
                       std::move(run.diagnostics)};
    out.diagnostics.residual = residual_check(out, spec, W, cfg.norm());
    return out;
}

ResidualReport residual_check(const SolutionTriple& solution, const ProblemSpec& spec,
                              const BrownianLattice& W, const WeightedNormConfig& cfg) {
    return residual_check(solution.x ? &*solution.x : nullptr, solution.y, solution.z, spec, W, cfg);
}

}  // namespace fbsdde
