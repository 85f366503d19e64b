#include "src/problem/terminal_rule.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "src/support/error.hpp"
#include "src/support/format.hpp"

namespace fbsdde {

namespace {

std::size_t arity_of(const std::string& name) {
    if (name == "constant") return 1;
    if (name == "affine") return 3;
    if (name == "quadratic") return 6;
    if (name == "clipped-affine") return 5;
    throw Error(ErrorCode::InvalidArgument, "unknown terminal rule '" + name + "'");
}

}  // namespace

TerminalRule::TerminalRule(std::string name, std::vector<double> params)
    : name_(std::move(name)), params_(std::move(params)) {
    const std::size_t arity = arity_of(name_);
    if (params_.size() != arity) {
        std::ostringstream os;
        os << "terminal rule '" << name_ << "' takes " << arity << " parameter(s), got "
           << params_.size();
        throw Error(ErrorCode::InvalidArgument, os.str());
    }
    for (double v : params_) {
        if (!std::isfinite(v)) {
            throw Error(ErrorCode::NonFinite, "terminal rule has a non-finite parameter");
        }
    }
    if (name_ == "clipped-affine" && !(params_[3] <= params_[4])) {
        throw Error(ErrorCode::InvalidArgument, "clipped-affine needs lo <= hi");
    }
}

double TerminalRule::operator()(double w, double x) const {
    const auto& p = params_;
    if (name_ == "constant") return p[0];
    if (name_ == "affine") return p[0] + p[1] * w + p[2] * x;
    if (name_ == "quadratic") {
        return p[0] + p[1] * w + p[2] * x + p[3] * w * w + p[4] * w * x + p[5] * x * x;
    }
    return std::clamp(p[0] + p[1] * w + p[2] * x, p[3], p[4]);
}

bool TerminalRule::independent_of_state() const noexcept {
    const auto& p = params_;
    if (name_ == "constant") return true;
    if (name_ == "affine" || name_ == "clipped-affine") return p[2] == 0.0;
    return p[2] == 0.0 && p[4] == 0.0 && p[5] == 0.0;
}

std::string TerminalRule::to_string() const {
    return name_ + "(" + join_numbers(params_) + ")";
}

}  // namespace fbsdde
