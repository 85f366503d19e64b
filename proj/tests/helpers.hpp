#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "src/problem/problem_spec.hpp"
#include "src/solver/picard.hpp"

namespace fbsdde::testing {

inline GeneratorSpec coefficient(CoefficientKind kind, std::string fn, std::vector<double> params,
                                 DelayMeasure alpha, double K = 0.01) {
    return make_generator(kind, std::move(fn), std::move(params), std::move(alpha), K);
}

inline GeneratorSpec driver(std::string fn, std::vector<double> params, double T, double K = 0.01) {
    return coefficient(CoefficientKind::DriverF, std::move(fn), std::move(params), DelayMeasure::dirac(T), K);
}

inline GeneratorSpec zero_driver(double T, double K = 0.01) { return driver("zero", {}, T, K); }

inline ProblemSpec bsde(double T, TerminalRule xi, GeneratorSpec f,
                        std::optional<GeneratorSpec> g = std::nullopt) {
    ProblemSpec s{ProblemMode::Bsde, T, std::move(xi), 0.0, std::move(f), std::move(g), std::nullopt, std::nullopt};
    return s;
}

inline ProblemSpec forward_backward(double T, double x, TerminalRule xi, GeneratorSpec f,
                          std::optional<GeneratorSpec> b, std::optional<GeneratorSpec> sigma,
                          std::optional<GeneratorSpec> g = std::nullopt) {
    ProblemSpec s{ProblemMode::Fbsdde, T, std::move(xi), x, std::move(f), std::move(g), std::move(b),
                  std::move(sigma)};
    return s;
}

inline SolverConfig config(double T, std::size_t N, std::size_t M, std::uint64_t seed = 1) {
    SolverConfig c;
    c.grid = TimeGrid(T, N);
    c.scenarios = M;
    c.seed = seed;
    return c;
}

/// xi = W(T)
inline TerminalRule brownian_terminal() { return TerminalRule("affine", {0.0, 1.0, 0.0}); }

}  // namespace fbsdde::testing
