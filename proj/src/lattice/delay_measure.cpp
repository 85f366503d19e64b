#include "src/lattice/delay_measure.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "src/support/error.hpp"

namespace fbsdde {

namespace {

constexpr double kWeightSumTolerance = 1e-12;
constexpr double kAlignmentTolerance = 1e-9;

}  // namespace

DelayMeasure DelayMeasure::dirac(double horizon) {
    return DelayMeasure({{0.0, 1.0}}, horizon);
}

DelayMeasure DelayMeasure::dirac_at(double lag, double horizon) {
    return DelayMeasure({{lag, 1.0}}, horizon);
}

DelayMeasure::DelayMeasure(std::vector<DelayAtom> atoms, double horizon)
    : atoms_(std::move(atoms)), horizon_(horizon) {
    if (!(horizon > 0.0)) {
        throw Error(ErrorCode::InvalidArgument, "delay measure horizon must be positive");
    }
    if (atoms_.empty()) {
        throw Error(ErrorCode::InvalidArgument, "delay measure needs at least one atom");
    }
    double total = 0.0;
    for (const auto& a : atoms_) {
        if (!std::isfinite(a.lag) || !std::isfinite(a.weight)) {
            throw Error(ErrorCode::NonFinite, "delay atom with non-finite lag or weight");
        }
        if (!(a.weight > 0.0)) {
            std::ostringstream os;
            os << "delay atom weight must be positive, got " << a.weight;
            throw Error(ErrorCode::InvalidArgument, os.str());
        }
        // Lags are compared against -T with a relative slack so that -T
        // written as a decimal still qualifies.
        if (a.lag > 0.0 || a.lag < -horizon * (1.0 + kAlignmentTolerance)) {
            std::ostringstream os;
            os << "delay lag " << a.lag << " outside [-" << horizon << ", 0]";
            throw Error(ErrorCode::InvalidArgument, os.str());
        }
        total += a.weight;
    }
    if (std::abs(total - 1.0) > kWeightSumTolerance) {
        std::ostringstream os;
        os.precision(17);
        os << "delay weights must sum to 1, got " << total;
        throw Error(ErrorCode::InvalidArgument, os.str());
    }
    std::vector<double> lags;
    lags.reserve(atoms_.size());
    for (const auto& a : atoms_) lags.push_back(a.lag);
    std::sort(lags.begin(), lags.end());
    if (std::adjacent_find(lags.begin(), lags.end()) != lags.end()) {
        throw Error(ErrorCode::InvalidArgument, "delay lags must be pairwise distinct");
    }
}

bool DelayMeasure::is_instantaneous() const noexcept {
    return atoms_.size() == 1 && atoms_.front().lag == 0.0;
}

std::vector<ResolvedAtom> DelayMeasure::resolve(const TimeGrid& grid) const {
    std::vector<ResolvedAtom> out;
    out.reserve(atoms_.size());
    const double dt = grid.dt();
    for (const auto& a : atoms_) {
        const double steps = a.lag / dt;
        const double rounded = std::round(steps);
        if (std::abs(steps - rounded) > kAlignmentTolerance * std::max(1.0, std::abs(steps))) {
            std::ostringstream os;
            os << "delay lag " << a.lag << " is not a multiple of dt=" << dt;
            throw Error(ErrorCode::Alignment, os.str());
        }
        const auto offset = static_cast<std::ptrdiff_t>(rounded);
        if (-offset > static_cast<std::ptrdiff_t>(grid.steps())) {
            std::ostringstream os;
            os << "delay lag " << a.lag << " reaches beyond -T on the grid";
            throw Error(ErrorCode::Alignment, os.str());
        }
        out.push_back({offset, a.weight});
    }
    return out;
}

}  // namespace fbsdde
