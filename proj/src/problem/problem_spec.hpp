#pragma once

#include <optional>
#include <string_view>

#include "src/lattice/time_grid.hpp"
#include "src/problem/generator.hpp"
#include "src/problem/terminal_rule.hpp"

namespace fbsdde {

enum class ProblemMode {
    Bsde,    ///< Y(t) = xi + int f ds - int (g + Z) dW
    Fbsdde,  ///< forward X with drift b and diffusion sigma, coupled to the BSDE above
};

std::string_view to_string(ProblemMode mode) noexcept;

/// Full problem description. Absent coefficients are identically zero and
/// do not enter the contraction constant.
struct ProblemSpec {
    ProblemMode mode = ProblemMode::Bsde;
    double horizon = 1.0;
    TerminalRule xi = TerminalRule::constant(0.0);
    double initial_x = 0.0;
    GeneratorSpec f;
    std::optional<GeneratorSpec> g;
    std::optional<GeneratorSpec> b;
    std::optional<GeneratorSpec> sigma;

    /// True when g is present and not identically zero.
    bool non_homogeneous() const noexcept { return g && !g->is_zero(); }

    bool operator==(const ProblemSpec&) const = default;
};

/// Structural checks: coefficient kinds, shared horizon, b/sigma only in
/// forward-backward mode, finite terminal value at the origin.
void validate(const ProblemSpec& spec);

/// validate() plus grid alignment of every delay measure and finiteness of
/// every coefficient at (t_i, 0, 0, 0).
void validate_for_grid(const ProblemSpec& spec, const TimeGrid& grid);

}  // namespace fbsdde
