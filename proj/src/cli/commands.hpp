#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace fbsdde {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;          ///< bad flags, unreadable or malformed spec
inline constexpr int kExitUnsatisfied = 2;    ///< certify: contraction condition fails
inline constexpr int kExitSolverFailure = 3;  ///< solver error after a valid start

/// Entry point of the command-line tool. `args` excludes the program name.
///
///   certify SPEC
///   solve SPEC
///   convergence-study SPEC --steps-list 4,8 --paths-list 1000,10000 [--oracle]
///   compare-oracle SPEC
///
/// Shared flags: --steps --paths --seed --beta --max-picard --tol
/// --basis-degree --out --workers --timestamp.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace fbsdde
