#include "src/problem/transforms.hpp"

#include <string>

#include "src/support/error.hpp"

namespace fbsdde {

const PathLattice& ProcessView::any() const {
    if (y) return *y;
    if (z) return *z;
    if (x) return *x;
    throw Error(ErrorCode::InvalidArgument, "process view holds no lattice");
}

Coefficient::Coefficient(GeneratorSpec phi) : base_(std::move(phi)) {}

Coefficient::Coefficient(GeneratorSpec phi, GeneratorSpec g)
    : base_(std::move(phi)), shift_(std::move(g)) {
    if (shift_->kind() != CoefficientKind::DiffusionG) {
        throw Error(ErrorCode::KindMismatch, "shift coefficient must be of kind diffusion-g");
    }
    if (base_->kind() == CoefficientKind::DiffusionG) {
        throw Error(ErrorCode::KindMismatch, "cannot shift the z argument of g itself");
    }
    if (base_->alpha().horizon() != shift_->alpha().horizon()) {
        throw Error(ErrorCode::InvalidArgument, "shifted coefficient and g use different horizons");
    }
}

BoundCoefficient Coefficient::bind(const TimeGrid& grid) const {
    BoundCoefficient out;
    out.grid_ = grid;
    out.base_ = base_;
    out.shift_ = shift_;
    if (base_) out.base_atoms_ = base_->alpha().resolve(grid);
    if (shift_) out.shift_atoms_ = shift_->alpha().resolve(grid);
    return out;
}

double Coefficient::operator()(const ProcessView& u, std::size_t scenario,
                               std::size_t time_index) const {
    const auto& lattice = u.any();
    if (time_index > lattice.grid().steps()) {
        throw Error(ErrorCode::Bounds, "coefficient evaluated at time index " +
                                           std::to_string(time_index) + " beyond N");
    }
    return bind(lattice.grid())(u, scenario, static_cast<std::ptrdiff_t>(time_index));
}

namespace {

inline double average_or_zero(const PathLattice* p, std::span<const ResolvedAtom> atoms,
                              std::size_t m, std::ptrdiff_t i) {
    return p ? delay_average(*p, atoms, m, i) : 0.0;
}

}  // namespace

double evaluate_diffusion_g(const BoundCoefficient& g, const ProcessView& u, std::size_t m,
                            std::ptrdiff_t j) {
    if (j < 0 || !g.base_) return 0.0;
    const double gx = average_or_zero(u.x, g.base_atoms_, m, j);
    const double gy = average_or_zero(u.y, g.base_atoms_, m, j);
    return g.base_->evaluate(g.grid_.time(static_cast<std::size_t>(j)), gx, gy, 0.0);
}

double BoundCoefficient::operator()(const ProcessView& u, std::size_t m, std::ptrdiff_t i) const {
    if (i < 0 || !base_) return 0.0;
    const double x = average_or_zero(u.x, base_atoms_, m, i);
    const double y = average_or_zero(u.y, base_atoms_, m, i);
    double z = 0.0;
    if (!shift_) {
        z = average_or_zero(u.z, base_atoms_, m, i);
    } else {
        for (const auto& a : base_atoms_) {
            const std::ptrdiff_t j = i + a.offset;
            const double zbar = u.z ? u.z->value_or_extension(m, j) : 0.0;
            double gj = 0.0;
            if (j >= 0) {
                const double gx = average_or_zero(u.x, shift_atoms_, m, j);
                const double gy = average_or_zero(u.y, shift_atoms_, m, j);
                gj = shift_->evaluate(grid_.time(static_cast<std::size_t>(j)), gx, gy, 0.0);
            }
            z += a.weight * (zbar - gj);
        }
    }
    return base_->evaluate(grid_.time(static_cast<std::size_t>(i)), x, y, z);
}

Coefficient make_homogeneous_driver(const GeneratorSpec& f, const GeneratorSpec& g) {
    if (f.kind() != CoefficientKind::DriverF) {
        throw Error(ErrorCode::KindMismatch, "make_homogeneous_driver: first argument must be a driver f");
    }
    if (g.kind() != CoefficientKind::DiffusionG) {
        throw Error(ErrorCode::KindMismatch, "make_homogeneous_driver: second argument must be g");
    }
    return Coefficient(f, g);
}

TransformedCoefficients make_transformed_coefficients(const std::optional<GeneratorSpec>& b,
                                                      const std::optional<GeneratorSpec>& sigma,
                                                      const GeneratorSpec& f,
                                                      const GeneratorSpec& g) {
    if (b && b->kind() != CoefficientKind::DriftB) {
        throw Error(ErrorCode::KindMismatch, "make_transformed_coefficients: b has the wrong kind");
    }
    if (sigma && sigma->kind() != CoefficientKind::DiffusionSigma) {
        throw Error(ErrorCode::KindMismatch, "make_transformed_coefficients: sigma has the wrong kind");
    }
    TransformedCoefficients out;
    out.f = make_homogeneous_driver(f, g);
    if (b) out.b = Coefficient(*b, g);
    if (sigma) out.sigma = Coefficient(*sigma, g);
    return out;
}

std::pair<PathLattice, PathLattice> map_back_solution(const PathLattice& y_bar,
                                                      const PathLattice& z_bar,
                                                      const GeneratorSpec& g,
                                                      const PathLattice* x) {
    require_same_shape(y_bar, z_bar, "map_back_solution");
    if (x) require_same_shape(y_bar, *x, "map_back_solution");
    if (g.kind() != CoefficientKind::DiffusionG) {
        throw Error(ErrorCode::KindMismatch, "map_back_solution: coefficient must be g");
    }
    const BoundCoefficient bound = Coefficient(g).bind(y_bar.grid());
    const ProcessView view{x, &y_bar, nullptr};
    PathLattice z(z_bar.grid(), z_bar.scenarios(), ProcessRole::Control);
    for (std::size_t i = 0; i < z.times(); ++i) {
        for (std::size_t m = 0; m < z.scenarios(); ++m) {
            z(m, i) = z_bar(m, i) - evaluate_diffusion_g(bound, view, m, static_cast<std::ptrdiff_t>(i));
        }
    }
    return {y_bar, std::move(z)};
}

}  // namespace fbsdde
