#include "src/lattice/path_lattice.hpp"

#include <cmath>
#include <sstream>

#include "src/support/error.hpp"

namespace fbsdde {

PathLattice::PathLattice(TimeGrid grid, std::size_t scenarios, ProcessRole role,
                         double frozen_initial)
    : grid_(grid),
      scenarios_(scenarios),
      role_(role),
      frozen_initial_(frozen_initial),
      values_((grid.steps() + 1) * scenarios, 0.0) {
    if (scenarios == 0) {
        throw Error(ErrorCode::InvalidArgument, "path lattice needs at least one scenario");
    }
}

PathLattice::PathLattice(TimeGrid grid, std::size_t scenarios, ProcessRole role,
                         std::vector<double> values, double frozen_initial)
    : grid_(grid),
      scenarios_(scenarios),
      role_(role),
      frozen_initial_(frozen_initial),
      values_(std::move(values)) {
    if (scenarios == 0) {
        throw Error(ErrorCode::InvalidArgument, "path lattice needs at least one scenario");
    }
    if (values_.size() != (grid.steps() + 1) * scenarios) {
        throw Error(ErrorCode::GridMismatch, "path lattice value count does not match grid");
    }
    require_finite("path lattice");
}

PathLattice PathLattice::from_function(TimeGrid grid, std::size_t scenarios, ProcessRole role,
                                       double frozen_initial, const ValueFn& fn) {
    PathLattice out(grid, scenarios, role, frozen_initial);
    for (std::size_t i = 0; i <= grid.steps(); ++i) {
        for (std::size_t m = 0; m < scenarios; ++m) out(m, i) = fn(m, i);
    }
    out.require_finite("path lattice");
    return out;
}

double PathLattice::value_at(std::size_t m, std::ptrdiff_t i) const {
    if (m >= scenarios_) {
        throw Error(ErrorCode::Bounds, "scenario index " + std::to_string(m) + " out of range");
    }
    if (i > static_cast<std::ptrdiff_t>(grid_.steps())) {
        throw Error(ErrorCode::Bounds, "time index " + std::to_string(i) + " beyond N=" +
                                           std::to_string(grid_.steps()));
    }
    return value_or_extension(m, i);
}

void PathLattice::require_finite(const char* what) const {
    for (std::size_t k = 0; k < values_.size(); ++k) {
        if (!std::isfinite(values_[k])) {
            std::ostringstream os;
            os << what << ": non-finite value at scenario " << k % scenarios_
               << ", time index " << k / scenarios_;
            throw Error(ErrorCode::NonFinite, os.str());
        }
    }
}

void require_same_shape(const PathLattice& a, const PathLattice& b, const char* context) {
    if (!a.same_shape(b)) {
        throw Error(ErrorCode::GridMismatch,
                    std::string(context) + ": lattices differ in grid or scenario count");
    }
}

double delay_average(const PathLattice& lattice, const DelayMeasure& alpha,
                     std::size_t scenario, std::size_t time_index) {
    if (time_index > lattice.grid().steps()) {
        throw Error(ErrorCode::Bounds, "delay_average: time index " +
                                           std::to_string(time_index) + " beyond N=" +
                                           std::to_string(lattice.grid().steps()));
    }
    if (scenario >= lattice.scenarios()) {
        throw Error(ErrorCode::Bounds, "delay_average: scenario index out of range");
    }
    const auto atoms = alpha.resolve(lattice.grid());
    return delay_average(lattice, atoms, scenario, static_cast<std::ptrdiff_t>(time_index));
}

PathLattice difference(const PathLattice& a, const PathLattice& b) {
    require_same_shape(a, b, "difference");
    PathLattice out(a.grid(), a.scenarios(), a.role(), a.frozen_initial() - b.frozen_initial());
    const auto da = a.data();
    const auto db = b.data();
    for (std::size_t i = 0; i < a.times(); ++i) {
        auto col = out.at_time(i);
        for (std::size_t m = 0; m < a.scenarios(); ++m) {
            col[m] = da[i * a.scenarios() + m] - db[i * a.scenarios() + m];
        }
    }
    return out;
}

}  // namespace fbsdde
