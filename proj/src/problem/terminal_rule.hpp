#pragma once

#include <string>
#include <vector>

namespace fbsdde {

/// Terminal condition xi as a function of the terminal Brownian value W(T)
/// and, for forward-backward problems, the terminal state X(T).
///
/// Catalog (written `name(p1, p2, ...)` in problem files):
///   constant(c)
///   affine(c0, cw, cx)                     c0 + cw W + cx X
///   quadratic(c0, cw, cx, cww, cwx, cxx)   affine + cww W^2 + cwx W X + cxx X^2
///   clipped-affine(c0, cw, cx, lo, hi)     clamp(affine, lo, hi)
class TerminalRule {
public:
    /// Throws Error(InvalidArgument) on unknown names or wrong arity.
    TerminalRule(std::string name, std::vector<double> params);

    static TerminalRule constant(double c) { return {"constant", {c}}; }

    double operator()(double w_terminal, double x_terminal) const;

    const std::string& name() const noexcept { return name_; }
    const std::vector<double>& params() const noexcept { return params_; }

    /// True when the rule ignores X(T).
    bool independent_of_state() const noexcept;

    /// `name(p1, p2, ...)` with round-trip exact numbers.
    std::string to_string() const;

    bool operator==(const TerminalRule&) const = default;

private:
    std::string name_;
    std::vector<double> params_;
};

}  // namespace fbsdde
