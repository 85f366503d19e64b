#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "src/problem/problem_spec.hpp"

namespace fbsdde {

/// Problem file format: INI-style sections, `key = value` lines, `#` or `;`
/// comments.
///
///   [problem]   mode = bsde | fbsdde
///               T = <real>
///               x = <real>                   (fbsdde only, required there)
///               xi = <rule>(<p1>, <p2>, ...)
///   [f] [g] [b] [sigma]
///               fn = <catalog name>
///               params = <comma list>        (may be empty)
///               alpha_lags = <comma list>    (default: 0)
///               alpha_weights = <comma list> (default: uniform over the lags)
///               lipschitz_K = <real>
///
/// [problem] and [f] are required; [b] and [sigma] only in fbsdde mode;
/// absent coefficients are identically zero. Errors are ParseError with the
/// offending line and field.
ProblemSpec parse_problem_spec(std::string_view text, std::string_view source = "<input>");

ProblemSpec load_problem_spec(const std::filesystem::path& path);

/// Inverse of parse_problem_spec for catalog-backed specs; throws
/// Error(InvalidArgument) if a coefficient uses a custom function.
std::string serialize_problem_spec(const ProblemSpec& spec);

}  // namespace fbsdde
