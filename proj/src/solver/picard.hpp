#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "src/lattice/iterate.hpp"
#include "src/mc/brownian.hpp"
#include "src/problem/contraction.hpp"
#include "src/problem/problem_spec.hpp"
#include "src/solver/regression.hpp"
#include "src/solver/residual.hpp"
#include "src/support/error.hpp"

namespace fbsdde {

struct SolverConfig {
    TimeGrid grid{1.0, 16};
    std::size_t scenarios = 10000;
    RegressionBasis basis;
    std::optional<double> beta;       ///< norm weight; 1/T when unset
    std::size_t max_picard = 50;
    double picard_tol = 1e-4;
    std::uint64_t seed = 1;
    std::size_t workers = 1;

    WeightedNormConfig norm() const { return {beta.value_or(1.0 / grid.horizon())}; }
};

/// Throws Error(InvalidArgument) for out-of-range settings or a grid whose
/// horizon differs from the problem's.
void validate(const SolverConfig& cfg, const ProblemSpec& spec);

struct DampedRegression {
    std::size_t iteration;
    std::size_t time_index;

    bool operator==(const DampedRegression&) const = default;
};

struct SolverDiagnostics {
    std::vector<double> iteration_diffs;      ///< D_n, n = 1, 2, ...
    std::vector<double> diff_stderr;
    std::vector<double> contraction_ratios;   ///< D_{n+1} / D_n where D_n > 0
    std::vector<double> ratio_stderr;
    std::optional<ResidualReport> residual;
    StopReason stop_reason = StopReason::MaxIterations;
    ContractionCertificate certificate;              ///< on the declared constants
    ContractionCertificate transformed_certificate;  ///< composed constants after the g-transform
    bool certified = false;
    std::vector<DampedRegression> damped;
    double y0_stderr = 0.0;
    std::vector<std::string> warnings;

    std::size_t iterations() const noexcept { return iteration_diffs.size(); }
};

struct SolutionTriple {
    std::optional<PathLattice> x;
    PathLattice y;
    PathLattice z;
    /// Zbar of the homogeneous problem when the solution went through the
    /// g-transform.
    std::optional<PathLattice> homogeneous_z;
    SolverDiagnostics diagnostics;

    double y0() const { return y(0, 0); }
};

/// Raised when a sweep fails mid-run; carries the diagnostics gathered up
/// to that point.
class SolverFailure : public Error {
public:
    SolverFailure(const Error& cause, SolverDiagnostics partial, std::optional<std::size_t> time_index)
        : Error(cause.code(), cause.what()), diagnostics_(std::move(partial)), time_index_(time_index) {}

    const SolverDiagnostics& diagnostics() const noexcept { return diagnostics_; }
    std::optional<std::size_t> time_index() const noexcept { return time_index_; }

private:
    SolverDiagnostics diagnostics_;
    std::optional<std::size_t> time_index_;
};

/// Monte Carlo Picard iteration for the homogeneous problem (g absent or
/// zero), starting from U^0 = 0 and stopping when D_n < picard_tol.
SolutionTriple picard_solve(const ProblemSpec& spec, const SolverConfig& cfg);
SolutionTriple picard_solve(const ProblemSpec& spec, const SolverConfig& cfg, const BrownianLattice& W);

/// Any g: transform to the homogeneous problem, solve, map back, and check
/// the residual of the original equation. Degenerates to picard_solve when
/// g is zero.
SolutionTriple solve_general(const ProblemSpec& spec, const SolverConfig& cfg);
SolutionTriple solve_general(const ProblemSpec& spec, const SolverConfig& cfg, const BrownianLattice& W);

ResidualReport residual_check(const SolutionTriple& solution, const ProblemSpec& spec,
                              const BrownianLattice& W, const WeightedNormConfig& cfg);

}  // namespace fbsdde
